"""Command-line front end.

One command per process; every subcommand is deterministic given its flags
(random generation is seeded and the seed is recorded in the output).  Exit
codes: 0 success / check passed, 1 a check ran and failed, 2 the check could
not be run (unresolved comparison, exhausted truncation, bad input).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import circle, diagram, invariants, ordering, reals, vershik
from .errors import (
    DepthExhausted,
    NoSimplicityWitness,
    SizeGuardExceeded,
    UnresolvedComparison,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2


# ---------------------------------------------------------------------------
# parsing helpers


def parse_real(text: str) -> reals.CertifiedReal:
    """Constructor mini-language: 'sqrt2m1', 'golden', 'qtree:0110',
    'sqrt<d>', a fraction 'p/q', or a decimal literal."""
    text = text.strip()
    if text == "sqrt2m1":
        return reals.SQRT2_MINUS_1
    if text == "golden":
        return reals.GOLDEN_MINUS_1
    if text.startswith("qtree:"):
        return reals.qtree_real([int(b) for b in text[len("qtree:"):]])
    if text.startswith("sqrt"):
        return reals.sqrt(int(text[4:]))
    return reals.rational(Fraction(text))


def parse_interval_set(text: str) -> circle.CircleIntervalSet:
    """'a,b' or 'a,b;c,d' as a union of half-open intervals."""
    pairs = []
    for part in text.split(";"):
        a, b = part.split(",")
        pairs.append((parse_real(a), parse_real(b)))
    return circle.CircleIntervalSet.from_pairs(pairs)


def parse_path(text: str) -> vershik.FinitePath:
    if text in ("", "(root)"):
        return vershik.FinitePath(())
    return vershik.FinitePath(tuple(int(e) for e in text.split(".")))


def parse_bits(text: str) -> tuple[int, ...]:
    return tuple(int(b) for b in text.strip())


def ordered_to_dict(od: ordering.OrderedBratteliDiagram) -> dict:
    data = diagram.diagram_to_dict(od.diagram)
    data["ranks"] = [list(r) for r in od.ranks]
    return data


def ordered_from_dict(data: dict) -> ordering.OrderedBratteliDiagram:
    base = diagram.diagram_from_dict(data)
    ranks = tuple(tuple(int(x) for x in level) for level in data["ranks"])
    return ordering.OrderedBratteliDiagram(base, ranks)


def load_any(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "ranks" in data:
        return ordered_from_dict(data)
    return diagram.diagram_from_dict(data)


def emit(args, payload: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
            if not payload.endswith("\n"):
                fh.write("\n")
    else:
        print(payload)


def dump_diagram(args, obj) -> None:
    if isinstance(obj, ordering.OrderedBratteliDiagram):
        data = ordered_to_dict(obj)
        ranks = obj.ranks
        base = obj.diagram
    else:
        data = diagram.diagram_to_dict(obj)
        ranks = None
        base = obj
    if args.format == "dot":
        emit(args, diagram.diagram_to_dot(base, ranks))
    else:
        emit(args, json.dumps(data))


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    if args.kind == "odometer":
        digits = [int(x) for x in args.params]
        od = ordering.odometer(digits)
        dump_diagram(args, od)
        return EXIT_OK
    if args.kind == "stationary":
        matrix = json.loads(args.matrix)
        provider = diagram.StationaryProvider(matrix)
        d = diagram.materialize(provider, args.depth + 1)  # bootstrap + depth copies
        dump_diagram(args, d)
        return EXIT_OK
    if args.kind == "random-simple":
        d = diagram.random_simple_diagram(args.seed, args.depth, args.vertices)
        data = diagram.diagram_to_dict(d)
        data["seed"] = args.seed
        if args.format == "dot":
            emit(args, diagram.diagram_to_dot(d))
        else:
            emit(args, json.dumps(data))
        return EXIT_OK
    raise ValueError(f"unknown generator {args.kind}")


def cmd_telescope(args) -> int:
    obj = load_any(args.infile)
    cuts = tuple(int(c) for c in args.cuts.split(","))
    if isinstance(obj, ordering.OrderedBratteliDiagram):
        dump_diagram(args, ordering.lex_telescope(obj, cuts))
    else:
        dump_diagram(args, diagram.telescope(obj, cuts))
    return EXIT_OK


def cmd_order(args) -> int:
    obj = load_any(args.infile)
    if isinstance(obj, ordering.OrderedBratteliDiagram):
        obj = obj.diagram
    horizon = args.horizon if args.horizon else obj.depth
    od = ordering.skau_order(obj, horizon)
    dump_diagram(args, od)
    return EXIT_OK


def cmd_check(args) -> int:
    obj = load_any(args.infile)
    if args.proper:
        if not isinstance(obj, ordering.OrderedBratteliDiagram):
            print("error: --proper needs an ordered diagram", file=sys.stderr)
            return EXIT_ERROR
        depth = args.depth if args.depth else obj.depth
        decision = ordering.properly_ordered_within(obj, depth)
        if isinstance(decision, ordering.ProperWitness):
            print(
                json.dumps(
                    {
                        "proper": True,
                        "depth": decision.depth,
                        "min_prefix": list(decision.min_prefix),
                        "max_prefix": list(decision.max_prefix),
                    }
                )
            )
            return EXIT_OK
        if isinstance(decision, ordering.NotProper):
            print(json.dumps({"proper": False, "reason": decision.reason}))
            return EXIT_CHECK_FAILED
        print(json.dumps({"proper": None, "reason": decision.reason}))
        return EXIT_ERROR
    if args.simple:
        base = obj.diagram if isinstance(obj, ordering.OrderedBratteliDiagram) else obj
        horizon = args.horizon if args.horizon else base.depth
        witness = diagram.is_simple_within(base, horizon)
        if witness is None:
            print(json.dumps({"simple": False, "horizon": horizon}))
            return EXIT_CHECK_FAILED
        print(json.dumps({"simple": True, "cuts": list(witness.cuts)}))
        return EXIT_OK
    print("error: choose --proper or --simple", file=sys.stderr)
    return EXIT_ERROR


def cmd_orbit(args) -> int:
    obj = load_any(args.infile)
    if not isinstance(obj, ordering.OrderedBratteliDiagram):
        print("error: orbit needs an ordered diagram", file=sys.stderr)
        return EXIT_ERROR
    start = parse_path(args.start)
    vershik.validate_path(obj, start)
    result = vershik.vershik_orbit(obj, start, args.steps, args.wrap)
    payload = {
        "paths": [str(p) for p in result.paths],
        "hit_boundary": result.hit_boundary,
    }
    emit(args, json.dumps(payload) if args.format == "json" else "\n".join(payload["paths"]))
    return EXIT_OK


def cmd_retset(args) -> int:
    gamma = parse_real(args.gamma)
    interval = parse_interval_set(args.interval)
    base = parse_real(args.base) if args.base else reals.ZERO
    members = circle.return_set(interval, gamma, args.window, base)
    payload = {
        "gamma": str(gamma),
        "interval": interval.describe(),
        "window": args.window,
        "return_set": members,
        "density": str(circle.window_density(members, args.window)),
    }
    emit(args, json.dumps(payload) if args.format == "json" else " ".join(map(str, members)))
    return EXIT_OK


def cmd_density(args) -> int:
    gamma = parse_real(args.gamma)
    alphas = tuple(parse_real(a) for a in args.alphas.split(","))
    spec = circle.ReturnAlgebraSpec(gamma, alphas, args.shift, args.depth)
    values = circle.density_set(spec, max_precision=args.precision)
    payload = {
        "gamma": str(gamma),
        "alphas": [str(a) for a in alphas],
        "shift_range": args.shift,
        "boolean_depth": args.depth,
        "densities": [
            {"symbolic": str(v), "decimal": v.decimal(18)} for v in values
        ],
    }
    emit(args, json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_reduce(args) -> int:
    params = invariants.ReductionParams(
        gamma_path=parse_bits(args.gamma_path),
        shift_range=args.shift,
        boolean_depth=args.depth,
        precision_cap=args.precision,
    )
    s = [parse_bits(p) for p in args.s.split(",")]
    sp = [parse_bits(p) for p in args.sprime.split(",")]
    result = invariants.reduction_pipeline(s, sp, params)
    emit(args, invariants.pipeline_report(s, sp, params, result))
    return EXIT_OK


def cmd_export(args) -> int:
    dump_diagram(args, load_any(args.infile))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bratteli",
        description="Bratteli-Vershik diagrams, rotation return words, density invariants",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "text", "dot"], default="json")
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("gen", help="generate a diagram")
    p.add_argument("kind", choices=["odometer", "stationary", "random-simple"])
    p.add_argument("params", nargs="*", help="odometer digit sizes")
    p.add_argument("--matrix", default=None, help="stationary incidence matrix, JSON")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--vertices", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("telescope", help="telescope a diagram")
    p.add_argument("infile")
    p.add_argument("--cuts", required=True, help="comma-separated cut levels")
    common(p)
    p.set_defaults(func=cmd_telescope)

    p = sub.add_parser("order", help="attach a proper order (source ordering)")
    p.add_argument("infile")
    p.add_argument("--horizon", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("check", help="simplicity / proper-ordering checks")
    p.add_argument("infile")
    p.add_argument("--proper", action="store_true")
    p.add_argument("--simple", action="store_true")
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--horizon", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("orbit", help="iterate the Vershik successor")
    p.add_argument("infile")
    p.add_argument("--start", required=True, help="path as e1.e2.e3 (0-based)")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--wrap", action="store_true")
    common(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("retset", help="rotation return set on a window")
    p.add_argument("--gamma", required=True)
    p.add_argument("--interval", required=True, help="a,b[;c,d ...]")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--base", default=None)
    common(p)
    p.set_defaults(func=cmd_retset)

    p = sub.add_parser("density", help="density set of a generated algebra")
    p.add_argument("--gamma", default="sqrt2m1")
    p.add_argument("--alphas", required=True, help="comma-separated generators")
    p.add_argument("--shift", type=int, default=1)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--precision", type=int, default=300)
    common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("reduce", help="distinguish two tree-path families")
    p.add_argument("--S", dest="s", required=True, help="comma-separated 0/1 paths")
    p.add_argument("--Sprime", dest="sprime", required=True)
    p.add_argument("--gamma-path", dest="gamma_path", required=True)
    p.add_argument("--shift", type=int, default=1)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--precision", type=int, default=300)
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("export", help="re-serialize a diagram (json or dot)")
    p.add_argument("infile")
    common(p)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UnresolvedComparison, DepthExhausted, SizeGuardExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except NoSimplicityWitness as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
