"""Vershik successor dynamics on truncated path spaces.

A depth-k path is a composable chain of edge indices from the root.  The
successor rule acts on the least non-maximal coordinate: replace it by its
rank successor and reset everything below to the unique minimal chain into
the new edge's source.  On an all-maximal path the true image depends on
coordinates beyond the truncation, so the step returns a typed boundary
outcome instead of guessing; orbit drivers either wrap (an explicit cyclic
model of the fiber) or stop.

All functions are pure; fibers are enumerated eagerly behind a size guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diagram import path_counts
from .errors import SizeGuardExceeded
from .ordering import OrderedBratteliDiagram, extreme_path_to

FIBER_SIZE_GUARD = 10**6


@dataclass(frozen=True)
class FinitePath:
    """Edge indices e_1..e_k, one per level, composable from the root."""

    edges: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.edges)

    def __str__(self) -> str:
        return ".".join(str(e) for e in self.edges) if self.edges else "(root)"


@dataclass(frozen=True)
class FiberMaximum:
    """Boundary outcome: every coordinate is maximal at this depth."""


@dataclass(frozen=True)
class FiberMinimum:
    """Boundary outcome: every coordinate is minimal at this depth."""


FIBER_MAX = FiberMaximum()
FIBER_MIN = FiberMinimum()


def make_path(od: OrderedBratteliDiagram, edges) -> FinitePath:
    p = FinitePath(tuple(edges))
    validate_path(od, p)
    return p


def validate_path(od: OrderedBratteliDiagram, p: FinitePath) -> None:
    if p.depth > od.depth:
        raise ValueError(f"path depth {p.depth} exceeds truncation {od.depth}")
    vertex = 0
    for n, e in enumerate(p.edges, start=1):
        level = od.diagram.edges[n - 1]
        if not 0 <= e < len(level):
            raise ValueError(f"edge index {e} out of range at level {n}")
        s, r = level[e]
        if s != vertex:
            raise ValueError(f"path breaks at level {n}: source {s} != {vertex}")
        vertex = r


def path_range(od: OrderedBratteliDiagram, p: FinitePath) -> int:
    if not p.edges:
        return 0
    return od.diagram.edges[p.depth - 1][p.edges[-1]][1]


def path_metric(p: FinitePath, q: FinitePath) -> Fraction:
    """2**-(least differing level); an ultrametric on equal-depth paths."""
    for i, (a, b) in enumerate(zip(p.edges, q.edges), start=1):
        if a != b:
            return Fraction(1, 2**i)
    if p.depth != q.depth:
        return Fraction(1, 2 ** (min(p.depth, q.depth) + 1))
    return Fraction(0)


# ---------------------------------------------------------------------------
# Fibers


@dataclass(frozen=True)
class PathFiber:
    """All depth-k paths into one vertex, in induced lexicographic order."""

    level: int
    vertex: int
    paths: tuple[FinitePath, ...]


def enumerate_fiber(
    od: OrderedBratteliDiagram, k: int, v: int, max_paths: int = FIBER_SIZE_GUARD
) -> PathFiber:
    """Exhaustive, duplicate-free, lex-sorted fiber enumeration.

    The recursive construction concatenates, per rank-ordered final edge, the
    already-sorted sub-fibers of the edge's source, which realizes exactly
    the order where the topmost differing coordinate decides.
    """
    if not 0 <= k <= od.depth:
        raise ValueError(f"level {k} out of range")
    expected = int(path_counts(od.diagram, k)[v]) if k else 1
    if expected > max_paths:
        raise SizeGuardExceeded(f"fiber holds {expected} paths, guard is {max_paths}")

    cache: dict[tuple[int, int], list[tuple[int, ...]]] = {}

    def build(level: int, vertex: int) -> list[tuple[int, ...]]:
        if level == 0:
            return [()]
        key = (level, vertex)
        if key not in cache:
            chains: list[tuple[int, ...]] = []
            for e in od.fiber_edges(level, vertex):
                s = od.diagram.edges[level - 1][e][0]
                chains.extend(prefix + (e,) for prefix in build(level - 1, s))
            cache[key] = chains
        return cache[key]

    paths = tuple(FinitePath(c) for c in build(k, v))
    return PathFiber(k, v, paths)


# ---------------------------------------------------------------------------
# Successor / predecessor


def _rank(od: OrderedBratteliDiagram, level: int, edge: int) -> int:
    return od.ranks[level - 1][edge]


def _fiber_of(od: OrderedBratteliDiagram, level: int, edge: int) -> tuple[int, ...]:
    vertex = od.diagram.edges[level - 1][edge][1]
    return od.fiber_edges(level, vertex)


def vershik_successor(
    od: OrderedBratteliDiagram, p: FinitePath
) -> FinitePath | FiberMaximum:
    """Lexicographic successor within the path's fiber.

    The range vertex at the path's depth is preserved.  Returns FIBER_MAX on
    the all-maximal path, whose true image needs deeper coordinates.
    """
    for i in range(p.depth):
        level = i + 1
        fiber = _fiber_of(od, level, p.edges[i])
        rank = _rank(od, level, p.edges[i])
        if rank < len(fiber) - 1:
            succ_edge = fiber[rank + 1]
            source = od.diagram.edges[level - 1][succ_edge][0]
            prefix = extreme_path_to(od, level - 1, source, "min") if i else ()
            return FinitePath(prefix + (succ_edge,) + p.edges[i + 1 :])
    return FIBER_MAX


def vershik_predecessor(
    od: OrderedBratteliDiagram, p: FinitePath
) -> FinitePath | FiberMinimum:
    """Mirror image of the successor: least non-minimal coordinate steps down
    and the levels below reset to the maximal chain."""
    for i in range(p.depth):
        level = i + 1
        fiber = _fiber_of(od, level, p.edges[i])
        rank = _rank(od, level, p.edges[i])
        if rank > 0:
            pred_edge = fiber[rank - 1]
            source = od.diagram.edges[level - 1][pred_edge][0]
            prefix = extreme_path_to(od, level - 1, source, "max") if i else ()
            return FinitePath(prefix + (pred_edge,) + p.edges[i + 1 :])
    return FIBER_MIN


def fiber_minimum(od: OrderedBratteliDiagram, k: int, v: int) -> FinitePath:
    return FinitePath(extreme_path_to(od, k, v, "min"))


def fiber_maximum(od: OrderedBratteliDiagram, k: int, v: int) -> FinitePath:
    return FinitePath(extreme_path_to(od, k, v, "max"))


@dataclass(frozen=True)
class OrbitResult:
    paths: tuple[FinitePath, ...]
    hit_boundary: bool


def vershik_orbit(
    od: OrderedBratteliDiagram, p: FinitePath, steps: int, wrap: bool = False
) -> OrbitResult:
    """Iterated successor.  With ``wrap`` the all-maximal path continues at
    the fiber minimum (the cyclic model of the fiber); otherwise iteration
    stops at the boundary and the result is flagged."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    out = [p]
    current = p
    for _ in range(steps):
        nxt = vershik_successor(od, current)
        if isinstance(nxt, FiberMaximum):
            if not wrap:
                return OrbitResult(tuple(out), True)
            nxt = fiber_minimum(od, current.depth, path_range(od, current))
        out.append(nxt)
        current = nxt
    return OrbitResult(tuple(out), False)
