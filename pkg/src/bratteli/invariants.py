"""Return-times data of Vershik systems and the density-set pipeline.

The pointed system is based at the maximal path.  Finite return windows are
computed exactly by adaptive deepening: work at a depth whose certified
extreme prefixes cover the window, step with the successor/predecessor rules,
and double the working depth whenever a boundary outcome appears before the
window is filled.  Nothing is wrapped silently.

The distinguishing pipeline materializes tree-path reals, builds the
generated circle algebras for two generator sets, and searches their density
sets for a value certified distinct from every value of the other side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .circle import IntervalAlgebra, ReturnAlgebraSpec, density_set, scaled_value_keys
from .errors import DepthExhausted, UnresolvedComparison
from .ordering import (
    NotProper,
    OrderedBratteliDiagram,
    ProperWitness,
    ensure_depth,
    lex_telescope,
    properly_ordered_within,
)
from .reals import CertifiedReal, certified_sign, qtree_reals
from .vershik import (
    FiberMaximum,
    FiberMinimum,
    FinitePath,
    validate_path,
    vershik_predecessor,
    vershik_successor,
)

_MAX_WORKING_DEPTH = 512


@dataclass(frozen=True)
class CylinderFamily:
    """Finite family of cylinder prefixes of one ordered diagram."""

    od: OrderedBratteliDiagram
    cylinders: tuple[FinitePath, ...]

    def __post_init__(self):
        seen = set()
        for c in self.cylinders:
            validate_path(self.od, c)
            if c.edges in seen:
                raise ValueError(f"duplicate cylinder {c}")
            seen.add(c.edges)


def _orbit_paths(
    od: OrderedBratteliDiagram,
    n: int,
    min_depth: int,
    base_offset: int = 0,
) -> tuple[OrderedBratteliDiagram, dict[int, FinitePath]]:
    """Depth-K paths of the i-th successor iterate of the maximal path, for
    i + base_offset over [-n, n] + base_offset, at a working depth K whose
    certified prefixes cover the whole window."""
    lo = -n + base_offset
    hi = n + base_offset
    depth = max(min_depth + 2, 4)
    at_truncation_limit = False
    while depth <= _MAX_WORKING_DEPTH:
        try:
            od_k = ensure_depth(od, depth)
            working = depth
        except DepthExhausted:
            if at_truncation_limit or od.depth < 2:
                raise
            od_k, working = od, od.depth  # last attempt at the full truncation
            at_truncation_limit = True
        decision = properly_ordered_within(od_k, working)
        if isinstance(decision, NotProper):
            raise ValueError(f"diagram is not properly ordered: {decision.reason}")
        ok = isinstance(decision, ProperWitness)
        orbit: dict[int, FinitePath] = {}
        if ok:
            # trust the survivor branches one level short of the window
            work = working - 1
            x_min = FinitePath(decision.min_prefix[:work])
            x_max = FinitePath(decision.max_prefix[:work])
            orbit[0] = x_max
            current: FinitePath = x_max
            for i in range(1, hi + 1):
                nxt = x_min if i == 1 else vershik_successor(od_k, current)
                if isinstance(nxt, FiberMaximum):
                    ok = False
                    break
                orbit[i] = nxt
                current = nxt
        if ok:
            current = x_max
            for i in range(-1, lo - 1, -1):
                nxt = vershik_predecessor(od_k, current)
                if isinstance(nxt, FiberMinimum):
                    ok = False
                    break
                orbit[i] = nxt
                current = nxt
        if ok:
            return od_k, orbit
        if at_truncation_limit:
            raise DepthExhausted(
                f"window [-{n}, {n}] not covered at truncation depth {od.depth}"
            )
        depth *= 2
    raise DepthExhausted(
        f"window [-{n}, {n}] not covered within working depth {_MAX_WORKING_DEPTH}"
    )


def vershik_return_window(
    od: OrderedBratteliDiagram,
    cylinder: FinitePath,
    n: int,
    base_offset: int = 0,
) -> list[int]:
    """0/1 word of length 2n+1: position i+n is 1 when the i-th iterate of
    the maximal path starts with the cylinder.  ``base_offset`` shifts the
    base point along the orbit (offset m bases the window at the m-th
    iterate)."""
    if n < 0:
        raise ValueError("window radius must be >= 0")
    _, orbit = _orbit_paths(od, n, cylinder.depth, base_offset)
    j = cylinder.depth
    return [
        1 if orbit[i + base_offset].edges[:j] == cylinder.edges else 0
        for i in range(-n, n + 1)
    ]


def ret_code(
    od: OrderedBratteliDiagram, family: CylinderFamily, n: int, base_offset: int = 0
) -> list[tuple[int, ...]]:
    """Word over the alphabet of indicator vectors: position i+n holds the
    membership bits of the i-th iterate in each cylinder of the family."""
    depths = [c.depth for c in family.cylinders]
    _, orbit = _orbit_paths(od, n, max(depths, default=0), base_offset)
    out = []
    for i in range(-n, n + 1):
        path = orbit[i + base_offset]
        out.append(
            tuple(
                1 if path.edges[: c.depth] == c.edges else 0 for c in family.cylinders
            )
        )
    return out


# ---------------------------------------------------------------------------
# Telescoping conjugacy at window level


def telescope_path_bijection(
    od: OrderedBratteliDiagram, cuts: Sequence[int], p: FinitePath
) -> FinitePath:
    """Canonical bijection from depth-cuts[-1] paths to telescoped paths:
    each block of constituent edges maps to its composite edge index."""
    from .diagram import composite_paths

    cuts = tuple(cuts)
    if p.depth not in cuts:
        raise ValueError(f"path depth {p.depth} is not a cut point of {cuts}")
    edges = []
    for a, b in zip(cuts, cuts[1:]):
        if a >= p.depth:
            break
        block = p.edges[a:b]
        chains = composite_paths(od.diagram, a, b)
        edges.append(chains.index(block))
    return FinitePath(tuple(edges))


@dataclass(frozen=True)
class ConjugacyReport:
    passed: bool
    window: int
    failures: tuple[str, ...]


def conjugacy_window_check(
    od: OrderedBratteliDiagram,
    cuts: Sequence[int],
    family: CylinderFamily,
    n: int,
) -> ConjugacyReport:
    """Return windows are invariant under telescoping: map each cylinder
    through the canonical path bijection and compare windows on [-n, n]."""
    ot = lex_telescope(od, cuts)
    failures = []
    for c in family.cylinders:
        image = telescope_path_bijection(od, cuts, c)
        w1 = vershik_return_window(od, c, n)
        w2 = vershik_return_window(ot, image, n)
        if w1 != w2:
            failures.append(f"cylinder {c}: window differs after telescoping")
    return ConjugacyReport(not failures, n, tuple(failures))


# ---------------------------------------------------------------------------
# The distinguishing pipeline


@dataclass(frozen=True)
class ReductionParams:
    gamma_path: tuple[int, ...]
    shift_range: int = 1
    boolean_depth: int = 2
    precision_cap: int = 300


@dataclass(frozen=True)
class Distinguished:
    witness: CertifiedReal
    side: str  # which input family contains the witness density
    left_size: int
    right_size: int

    @property
    def verdict(self) -> str:
        return "Distinguished"


@dataclass(frozen=True)
class IndistinguishableAtDepth:
    left_size: int
    right_size: int
    identical: bool  # the two generated algebras agree elementwise

    @property
    def verdict(self) -> str:
        return "IndistinguishableAtDepth"


def _algebra_spec(
    gamma: CertifiedReal, alphas: Sequence[CertifiedReal], params: ReductionParams
) -> ReturnAlgebraSpec:
    return ReturnAlgebraSpec(
        gamma, tuple(alphas), params.shift_range, params.boolean_depth
    )


def reduction_pipeline(
    s_paths: Sequence[Sequence[int]],
    sprime_paths: Sequence[Sequence[int]],
    params: ReductionParams,
) -> Distinguished | IndistinguishableAtDepth:
    """Decide whether two finite tree-path families generate distinguishable
    density sets.

    Equal families yield elementwise-identical algebras (asserted) and an
    IndistinguishableAtDepth verdict.  Distinct families are distinguished by
    a density value of one side certified distinct from every value of the
    other side; comparisons that stay unresolved at the precision cap raise.
    """
    s_keys = sorted({tuple(int(b) for b in p) for p in s_paths})
    sp_keys = sorted({tuple(int(b) for b in p) for p in sprime_paths})
    if not s_keys or not sp_keys:
        raise ValueError("both path families must be non-empty")
    g_key = tuple(int(b) for b in params.gamma_path)
    if g_key in s_keys or g_key in sp_keys:
        raise ValueError("the rotation path must differ from all generator paths")

    (gamma,) = qtree_reals([g_key])
    left_spec = _algebra_spec(gamma, qtree_reals(s_keys), params)
    right_spec = _algebra_spec(gamma, qtree_reals(sp_keys), params)

    if s_keys == sp_keys:
        left_sets = IntervalAlgebra(left_spec, max_precision=params.precision_cap)
        right_sets = IntervalAlgebra(right_spec, max_precision=params.precision_cap)
        left = [s.key() for s in left_sets.sets()]
        right = [s.key() for s in right_sets.sets()]
        if left != right:
            raise AssertionError("equal generator sets produced different algebras")
        return IndistinguishableAtDepth(len(left), len(right), True)

    dens_left = density_set(left_spec, max_precision=params.precision_cap)
    dens_right = density_set(right_spec, max_precision=params.precision_cap)
    all_keys = scaled_value_keys(tuple(dens_left) + tuple(dens_right))

    def witness_from(source, other, side, source_keys, other_keys):
        if source_keys is not None:
            other_set = set(other_keys)
            for v, k in zip(source, source_keys):
                if k not in other_set:
                    return Distinguished(v, side, len(dens_left), len(dens_right))
            return None
        for v in source:
            if all(
                certified_sign(v - u, params.precision_cap) != 0 for u in other
            ):
                return Distinguished(v, side, len(dens_left), len(dens_right))
        return None

    lk = all_keys[: len(dens_left)] if all_keys is not None else None
    rk = all_keys[len(dens_left) :] if all_keys is not None else None
    found = witness_from(dens_left, dens_right, "left", lk, rk) or witness_from(
        dens_right, dens_left, "right", rk, lk
    )
    if found is not None:
        return found
    return IndistinguishableAtDepth(len(dens_left), len(dens_right), False)


def pipeline_report(
    s_paths: Sequence[Sequence[int]],
    sprime_paths: Sequence[Sequence[int]],
    params: ReductionParams,
    result: Distinguished | IndistinguishableAtDepth,
) -> str:
    """JSON report: inputs, density-set sizes, verdict, witness."""
    payload = {
        "inputs": {
            "S": ["".join(str(b) for b in p) for p in s_paths],
            "S_prime": ["".join(str(b) for b in p) for p in sprime_paths],
            "gamma_path": "".join(str(b) for b in params.gamma_path),
            "shift_range": params.shift_range,
            "boolean_depth": params.boolean_depth,
            "precision_cap": params.precision_cap,
        },
        "density_set_sizes": {"S": result.left_size, "S_prime": result.right_size},
        "verdict": result.verdict,
    }
    if isinstance(result, Distinguished):
        payload["witness"] = {
            "symbolic": str(result.witness),
            "decimal": result.witness.decimal(24),
            "side": result.side,
        }
    else:
        payload["algebras_identical"] = result.identical
    return json.dumps(payload, indent=2)
