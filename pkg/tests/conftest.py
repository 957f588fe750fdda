"""Shared fixtures and independent oracles used across the suite."""

from __future__ import annotations

import itertools
import random

import pytest

from bratteli import BratteliDiagram, OrderedBratteliDiagram, random_simple_diagram
from bratteli.ordering import RankedTableProvider


def figure_one() -> BratteliDiagram:
    """The two-level worked example: a root bootstrap level, then a
    4-vertex level and a 2-vertex level with the mixed multiplicities."""
    return BratteliDiagram(
        (1, 2, 4, 2),
        (
            ((0, 0), (0, 1)),
            ((1, 0), (0, 1), (0, 1), (1, 1), (0, 2), (1, 3), (1, 3)),
            ((0, 0), (0, 0), (1, 0), (0, 1), (2, 1), (3, 1)),
        ),
    )


@pytest.fixture
def fig1() -> BratteliDiagram:
    return figure_one()


def two_disjoint_chains(depth: int = 4) -> BratteliDiagram:
    """Two parallel chains after the root: no block of levels past the root
    ever has positive incidence."""
    return BratteliDiagram(
        (1,) + (2,) * depth,
        (((0, 0), (0, 1)),) + tuple(((0, 0), (1, 1)) for _ in range(depth - 1)),
    )


def crossing_chains_ordered(depth: int = 4) -> tuple[BratteliDiagram, tuple]:
    """Simple diagram (full incidence) whose fiber-minimal edges stay on two
    persistent vertex chains, so two minimal branches survive every depth."""
    d = BratteliDiagram(
        (1,) + (2,) * depth,
        (((0, 0), (0, 1)),)
        + tuple(((0, 0), (1, 0), (1, 1), (0, 1)) for _ in range(depth - 1)),
    )
    ranks = ((0, 0),) + tuple((0, 1, 0, 1) for _ in range(depth - 1))
    return d, ranks


def random_ordered_simple(seed: int, depth: int = 5, max_vertices: int = 4) -> OrderedBratteliDiagram:
    """Seeded random simple diagram with random per-fiber ranks; the provider
    extends with index-ranked levels."""
    rng = random.Random(seed)
    d = random_simple_diagram(seed ^ 0x9E3779B9, depth, max_vertices)
    ranks = []
    for level in d.edges:
        fibers: dict[int, list[int]] = {}
        for i, (_, r) in enumerate(level):
            fibers.setdefault(r, []).append(i)
        level_ranks = [0] * len(level)
        for fiber in fibers.values():
            perm = list(range(len(fiber)))
            rng.shuffle(perm)
            for pos, i in zip(perm, fiber):
                level_ranks[i] = pos
        ranks.append(tuple(level_ranks))
    provider = RankedTableProvider(d.provider, "index") if d.provider else None
    return OrderedBratteliDiagram(d, tuple(ranks), provider)


# ---------------------------------------------------------------------------
# Independent oracles


def brute_force_paths(d: BratteliDiagram, k: int, v: int | None = None) -> list[tuple[int, ...]]:
    """Exhaustive depth-k path enumeration via raw product-and-filter."""
    out = []
    for combo in itertools.product(*(range(len(d.edges[n])) for n in range(k))):
        vertex = 0
        for n, e in enumerate(combo):
            s, r = d.edges[n][e]
            if s != vertex:
                break
            vertex = r
        else:
            if v is None or vertex == v:
                out.append(combo)
    return out


def lex_sorted_oracle(od: OrderedBratteliDiagram, k: int, v: int) -> list[tuple[int, ...]]:
    """Fiber sorted by the induced lexicographic order: reversed rank tuples."""
    paths = brute_force_paths(od.diagram, k, v)

    def key(p):
        return tuple(reversed([od.ranks[n][e] for n, e in enumerate(p)]))

    return sorted(paths, key=key)


def mixed_radix_increment(digits: tuple[int, ...], value: tuple[int, ...]) -> tuple[int, ...] | None:
    """Add one with carry, least significant digit first; None on overflow."""
    out = list(value)
    for i, base in enumerate(digits):
        if out[i] + 1 < base:
            out[i] += 1
            return tuple(out)
        out[i] = 0
    return None
