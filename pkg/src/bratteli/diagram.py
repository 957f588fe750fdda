"""Bratteli diagrams as finite truncations.

A diagram is a graded multigraph: vertex counts per level (level 0 is a
single root) and, per level n >= 1, an ordered list of edges (source, range)
with source in level n-1 and range in level n.  Edge identity is positional:
(level, index).  Infinite diagrams are represented by deterministic level
providers; operations that need more levels than the truncation holds extend
through the provider and fail loudly when they cannot.

Values are immutable after construction; providers must be pure functions of
the level index, so concurrent readers never see inconsistent data.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DepthExhausted, SizeGuardExceeded

EdgeList = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class LevelData:
    """One level produced by a provider: vertex count, edges, optional ranks."""

    vertices: int
    edges: EdgeList
    ranks: tuple[int, ...] | None = None


class LevelProvider:
    """Deterministic source of levels beyond a truncation.

    ``level(n)`` (n >= 1) must return identical data on repeated calls.
    """

    kind = "abstract"

    def level(self, n: int) -> LevelData:  # pragma: no cover - interface
        raise NotImplementedError

    def max_depth(self) -> int | None:
        """Deepest available level, or None when unbounded."""
        return None


class ExplicitTableProvider(LevelProvider):
    kind = "explicit-table"

    def __init__(self, levels: Sequence[LevelData]):
        self._levels = tuple(levels)

    def level(self, n: int) -> LevelData:
        if not 1 <= n <= len(self._levels):
            raise DepthExhausted(f"table provider has no level {n}")
        return self._levels[n - 1]

    def max_depth(self) -> int | None:
        return len(self._levels)


class PeriodicProvider(LevelProvider):
    """A finite prefix followed by a repeating cycle of levels."""

    kind = "eventually-periodic"

    def __init__(self, prefix: Sequence[LevelData], cycle: Sequence[LevelData]):
        if not cycle:
            raise ValueError("cycle must be non-empty")
        self._prefix = tuple(prefix)
        self._cycle = tuple(cycle)

    def level(self, n: int) -> LevelData:
        if n < 1:
            raise ValueError("levels start at 1")
        if n <= len(self._prefix):
            return self._prefix[n - 1]
        return self._cycle[(n - len(self._prefix) - 1) % len(self._cycle)]


class StationaryProvider(PeriodicProvider):
    """Bootstrap level (one root edge per vertex) followed by one repeating
    incidence pattern."""

    kind = "stationary"

    def __init__(self, matrix: Sequence[Sequence[int]]):
        m = [list(row) for row in matrix]
        size = len(m)
        if any(len(row) != size for row in m):
            raise ValueError("stationary incidence matrix must be square")
        boot = LevelData(size, tuple((0, v) for v in range(size)))
        edges = tuple(
            (j, i) for i in range(size) for j in range(size) for _ in range(m[i][j])
        )
        super().__init__([boot], [LevelData(size, edges)])


@dataclass(frozen=True)
class BratteliDiagram:
    """Finite truncation of a Bratteli diagram."""

    levels: tuple[int, ...]
    edges: tuple[EdgeList, ...]
    provider: LevelProvider | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.levels or self.levels[0] != 1:
            raise ValueError("level 0 must be a single root vertex")
        if any(v <= 0 for v in self.levels):
            raise ValueError("vertex counts must be positive")
        if len(self.edges) != len(self.levels) - 1:
            raise ValueError("need one edge list per level n >= 1")
        for n, level_edges in enumerate(self.edges, start=1):
            seen_ranges = set()
            seen_sources = set()
            for s, r in level_edges:
                if not (0 <= s < self.levels[n - 1] and 0 <= r < self.levels[n]):
                    raise ValueError(f"edge ({s},{r}) out of range at level {n}")
                seen_ranges.add(r)
                seen_sources.add(s)
            if seen_ranges != set(range(self.levels[n])):
                raise ValueError(f"level {n}: some vertex has no incoming edge")
            if seen_sources != set(range(self.levels[n - 1])):
                raise ValueError(f"level {n}: some vertex has no outgoing edge")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def with_provider(self, provider: LevelProvider | None) -> "BratteliDiagram":
        return BratteliDiagram(self.levels, self.edges, provider)


def materialize(provider: LevelProvider, depth: int) -> BratteliDiagram:
    """Truncate a provider to the given depth."""
    levels = [1]
    edges = []
    for n in range(1, depth + 1):
        data = provider.level(n)
        levels.append(data.vertices)
        edges.append(tuple(data.edges))
    return BratteliDiagram(tuple(levels), tuple(edges), provider)


def ensure_depth(d: BratteliDiagram, depth: int) -> BratteliDiagram:
    """Extend the truncation through its provider; error when impossible."""
    if depth <= d.depth:
        return d
    if d.provider is None:
        raise DepthExhausted(
            f"diagram truncated at depth {d.depth}, no provider for depth {depth}"
        )
    levels = list(d.levels)
    edges = list(d.edges)
    for n in range(d.depth + 1, depth + 1):
        data = d.provider.level(n)
        levels.append(data.vertices)
        edges.append(tuple(data.edges))
    return BratteliDiagram(tuple(levels), tuple(edges), d.provider)


def truncate(d: BratteliDiagram, depth: int) -> BratteliDiagram:
    if depth > d.depth:
        return ensure_depth(d, depth)
    return BratteliDiagram(d.levels[: depth + 1], d.edges[:depth], d.provider)


# ---------------------------------------------------------------------------
# Incidence matrices


def incidence_matrix(d: BratteliDiagram, n: int) -> np.ndarray:
    """|V_n| x |V_{n-1}| matrix of edge multiplicities at level n."""
    if not 1 <= n <= d.depth:
        raise ValueError(f"level {n} out of range 1..{d.depth}")
    m = np.zeros((d.levels[n], d.levels[n - 1]), dtype=np.int64)
    for s, r in d.edges[n - 1]:
        m[r, s] += 1
    return m


def incidence_product(d: BratteliDiagram, start: int, stop: int) -> np.ndarray:
    """M_stop @ ... @ M_{start+1}: incidence of the path set from level start
    to level stop."""
    if not 0 <= start < stop <= d.depth:
        raise ValueError("need 0 <= start < stop <= depth")
    prod = incidence_matrix(d, start + 1)
    for n in range(start + 2, stop + 1):
        prod = incidence_matrix(d, n) @ prod
    return prod


def path_counts(d: BratteliDiagram, k: int) -> np.ndarray:
    """Number of depth-k root paths ending at each vertex of level k."""
    if k == 0:
        return np.array([1], dtype=np.int64)
    return incidence_product(d, 0, k)[:, 0]


# ---------------------------------------------------------------------------
# Telescoping


def _validate_cuts(d: BratteliDiagram, cuts: Sequence[int]) -> tuple[int, ...]:
    cuts = tuple(cuts)
    if len(cuts) < 2 or cuts[0] != 0 or cuts[-1] != d.depth:
        raise ValueError(f"cuts must run 0 .. {d.depth}, got {cuts}")
    if any(a >= b for a, b in zip(cuts, cuts[1:])):
        raise ValueError(f"cuts must be strictly increasing, got {cuts}")
    return cuts


def composite_paths(d: BratteliDiagram, start: int, stop: int) -> list[tuple[int, ...]]:
    """All edge-index chains from level start to level stop, in canonical
    order (lexicographic in constituent edge indices).  This enumeration is
    the constituent record of the telescoped edges."""
    if start == stop:
        return [()]
    out: list[tuple[int, ...]] = []
    for idx, (_, r) in enumerate(d.edges[start]):
        _extend_chain(d, (idx,), r, start + 1, stop, out)
    return out


def _extend_chain(d, chain, vertex, n, stop, out):
    if n == stop:
        out.append(chain)
        return
    for idx, (s, r) in enumerate(d.edges[n]):
        if s == vertex:
            _extend_chain(d, chain + (idx,), r, n + 1, stop, out)


class TelescopedProvider(LevelProvider):
    """Extends a telescoped diagram with identity blocks past the last cut."""

    kind = "telescoped"

    def __init__(self, base: LevelProvider, base_depth: int, num_blocks: int):
        self._base = base
        self._base_depth = base_depth
        self._blocks = num_blocks

    def level(self, n: int) -> LevelData:
        if n <= self._blocks:
            raise ValueError("telescoped provider only extends past the cuts")
        return self._base.level(self._base_depth + (n - self._blocks))


def telescope(d: BratteliDiagram, cuts: Sequence[int]) -> BratteliDiagram:
    """Collapse levels between consecutive cuts into composite edges.

    Composite edge j at new level t is the j-th chain of
    ``composite_paths(d, cuts[t-1], cuts[t])``; incidence matrices of the
    result are the corresponding products.
    """
    cuts = _validate_cuts(d, cuts)
    levels = tuple(d.levels[c] for c in cuts)
    new_edges = []
    for a, b in zip(cuts, cuts[1:]):
        chains = composite_paths(d, a, b)
        level_edges = []
        for chain in chains:
            s = d.edges[a][chain[0]][0]
            r = d.edges[b - 1][chain[-1]][1]
            level_edges.append((s, r))
        new_edges.append(tuple(level_edges))
    provider = None
    if d.provider is not None:
        provider = TelescopedProvider(d.provider, d.depth, len(cuts) - 1)
    return BratteliDiagram(levels, tuple(new_edges), provider)


# ---------------------------------------------------------------------------
# Simplicity


@dataclass(frozen=True)
class SimpleWitness:
    """Cut sequence whose telescoped incidence blocks are entrywise positive."""

    cuts: tuple[int, ...]


def is_simple_within(d: BratteliDiagram, horizon: int) -> SimpleWitness | None:
    """Greedy search for a positive telescoping within the horizon.

    Cuts are placed as early as each block's incidence product turns
    entrywise positive; positivity is monotone under widening a block, so the
    straggling tail merges into the last positive block.  Returns None when
    no block past the root level becomes positive within the horizon (the
    root block alone is vacuously positive and carries no simplicity
    content).
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    d = ensure_depth(d, horizon)
    cuts = [0]
    pos = 0
    while pos < horizon:
        found = None
        for b in range(pos + 1, horizon + 1):
            if (incidence_product(d, pos, b) > 0).all():
                found = b
                break
        if found is None:
            if len(cuts) >= 3:  # at least one positive block past the root
                cuts[-1] = horizon  # widen the last positive block
                return SimpleWitness(tuple(cuts))
            return None
        cuts.append(found)
        pos = found
    return SimpleWitness(tuple(cuts))


# ---------------------------------------------------------------------------
# Isomorphism


@dataclass(frozen=True)
class IsomorphismWitness:
    """Levelwise vertex bijections and edge bijections intertwining the
    source and range maps."""

    vertex_maps: tuple[tuple[int, ...], ...]
    edge_maps: tuple[tuple[int, ...], ...]


def are_isomorphic(
    d1: BratteliDiagram,
    d2: BratteliDiagram,
    max_vertices: int = 8,
) -> IsomorphismWitness | None:
    """Exhaustive levelwise search for a graded isomorphism.

    Intended for desk-scale diagrams; levels wider than ``max_vertices``
    raise :class:`SizeGuardExceeded`.
    """
    if d1.levels != d2.levels:
        return None
    if tuple(len(e) for e in d1.edges) != tuple(len(e) for e in d2.edges):
        return None
    if max(d1.levels) > max_vertices:
        raise SizeGuardExceeded(
            f"levels up to {max(d1.levels)} vertices exceed guard {max_vertices}"
        )

    from itertools import permutations

    depth = d1.depth
    target_multisets = [Counter(d2.edges[n]) for n in range(depth)]

    def search(n: int, maps: list[tuple[int, ...]]):
        if n > depth:
            return maps
        prev = maps[n - 1]
        for perm in permutations(range(d1.levels[n])):
            mapped = Counter((prev[s], perm[r]) for s, r in d1.edges[n - 1])
            if mapped == target_multisets[n - 1]:
                result = search(n + 1, maps + [perm])
                if result is not None:
                    return result
        return None

    vertex_maps = search(1, [(0,)])
    if vertex_maps is None:
        return None

    edge_maps = []
    for n in range(1, depth + 1):
        f_prev, f_here = vertex_maps[n - 1], vertex_maps[n]
        buckets: dict[tuple[int, int], list[int]] = {}
        for j, e in enumerate(d2.edges[n - 1]):
            buckets.setdefault(e, []).append(j)
        g = [0] * len(d1.edges[n - 1])
        for i, (s, r) in enumerate(d1.edges[n - 1]):
            g[i] = buckets[(f_prev[s], f_here[r])].pop(0)
        edge_maps.append(tuple(g))
    return IsomorphismWitness(tuple(tuple(m) for m in vertex_maps), tuple(edge_maps))


# ---------------------------------------------------------------------------
# Serialization


def diagram_to_dict(d: BratteliDiagram) -> dict:
    return {
        "levels": list(d.levels),
        "edges": [[[s, r] for s, r in level] for level in d.edges],
    }


def diagram_from_dict(data: dict) -> BratteliDiagram:
    levels = tuple(int(v) for v in data["levels"])
    edges = tuple(
        tuple((int(s), int(r)) for s, r in level) for level in data["edges"]
    )
    return BratteliDiagram(levels, edges)


def diagram_to_json(d: BratteliDiagram) -> str:
    return json.dumps(diagram_to_dict(d))


def diagram_from_json(text: str) -> BratteliDiagram:
    return diagram_from_dict(json.loads(text))


def diagram_to_dot(d: BratteliDiagram, ranks: Sequence[Sequence[int]] | None = None) -> str:
    """GraphViz rendering: one rank row per level, edges oriented downward."""
    lines = ["digraph bratteli {", "  rankdir=TB;", "  node [shape=circle];"]
    for n, count in enumerate(d.levels):
        names = " ".join(f'"v{n}_{v}"' for v in range(count))
        lines.append(f"  {{ rank=same; {names} }}")
    for n, level in enumerate(d.edges, start=1):
        for idx, (s, r) in enumerate(level):
            label = f"e{idx}"
            if ranks is not None:
                label += f":r{ranks[n - 1][idx]}"
            lines.append(f'  "v{n - 1}_{s}" -> "v{n}_{r}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Generators used by the CLI and the test corpus


def odometer_levels(digits: Sequence[int]) -> list[LevelData]:
    out = []
    for dn in digits:
        if dn < 1:
            raise ValueError("odometer digits must be >= 1")
        out.append(LevelData(1, tuple((0, 0) for _ in range(dn)), tuple(range(dn))))
    return out


def random_simple_diagram(
    seed: int,
    depth: int = 5,
    max_vertices: int = 4,
    rng: random.Random | None = None,
) -> BratteliDiagram:
    """Seeded random simple diagram backed by a periodic provider.

    Odd levels have full incidence (every source-range pair present), so a
    positive telescoping always exists within any horizon >= 2 and the
    diagram stays simple under periodic extension.
    """
    rng = rng or random.Random(seed)
    counts = [1] + [rng.randint(2, max_vertices) for _ in range(depth)]
    level_data: list[LevelData] = []
    for n in range(1, depth + 1):
        prev, here = counts[n - 1], counts[n]
        edges: list[tuple[int, int]] = []
        if n % 2 == 1:
            for r in range(here):
                for s in range(prev):
                    edges.append((s, r))
            extra = rng.randrange(0, 2)
            for _ in range(extra):
                edges.append((rng.randrange(prev), rng.randrange(here)))
        else:
            for r in range(here):
                edges.append((rng.randrange(prev), r))
            for s in range(prev):
                if all(e[0] != s for e in edges):
                    edges.append((s, rng.randrange(here)))
            for _ in range(rng.randrange(1, 3)):
                edges.append((rng.randrange(prev), rng.randrange(here)))
        level_data.append(LevelData(here, tuple(edges)))
    # periodic extension: a full-incidence glue level returns to counts[1],
    # then the generated levels 2..depth repeat
    glue = LevelData(
        counts[1], tuple((s, r) for r in range(counts[1]) for s in range(counts[depth]))
    )
    provider = PeriodicProvider(level_data, [glue] + level_data[1:])
    return materialize(provider, depth)
