"""Path fibers and the successor/predecessor dynamics."""

import itertools
from fractions import Fraction

import pytest

from bratteli import (
    BratteliDiagram,
    FIBER_MAX,
    FIBER_MIN,
    FiberMaximum,
    FiberMinimum,
    FinitePath,
    OrderedBratteliDiagram,
    SizeGuardExceeded,
    enumerate_fiber,
    fiber_maximum,
    fiber_minimum,
    make_path,
    odometer,
    path_metric,
    path_range,
    vershik_orbit,
    vershik_predecessor,
    vershik_successor,
)

from conftest import lex_sorted_oracle, mixed_radix_increment, random_ordered_simple


def test_path_validation():
    od = odometer([2, 2])
    make_path(od, (1, 0))
    with pytest.raises(ValueError):
        make_path(od, (2, 0))
    with pytest.raises(ValueError):
        make_path(od, (0, 0, 0))
    d = BratteliDiagram((1, 2), (((0, 0), (0, 1)),))
    od2 = OrderedBratteliDiagram(d, ((0, 0),))
    with pytest.raises(ValueError):
        OrderedBratteliDiagram(d, ((0,),))


def test_binary_odometer_fiber_in_counter_order():
    od = odometer([2, 2, 2])
    fiber = enumerate_fiber(od, 3, 0)
    digits = (2, 2, 2)
    value = (0, 0, 0)
    for p in fiber.paths:
        assert p.edges == value
        value = mixed_radix_increment(digits, value)
    assert value is None  # exactly 8 paths consumed


def test_depth_one_fiber_is_rank_sorted_edge_set():
    od = random_ordered_simple(11, depth=3)
    for v in range(od.diagram.levels[1]):
        fiber = enumerate_fiber(od, 1, v)
        assert tuple(p.edges[0] for p in fiber.paths) == od.fiber_edges(1, v)


def test_fiber_size_from_incidence_product():
    d = BratteliDiagram(
        (1, 2, 2),
        (
            ((0, 0), (0, 1)),
            # multiplicities [[2, 3], [1, 3]]
            ((0, 0), (0, 0), (1, 0), (1, 0), (1, 0), (0, 1), (1, 1), (1, 1), (1, 1)),
        ),
    )
    from bratteli.ordering import order_by_rule

    odr = order_by_rule(d)
    assert len(enumerate_fiber(odr, 2, 0).paths) == 5
    assert len(enumerate_fiber(odr, 2, 1).paths) == 4


def test_fiber_size_guard():
    od = odometer([2] * 12)
    with pytest.raises(SizeGuardExceeded):
        enumerate_fiber(od, 12, 0, max_paths=100)


def test_successor_examples_binary_odometer():
    od = odometer([2, 2, 2, 2])
    assert vershik_successor(od, FinitePath((0, 0, 0, 0))) == FinitePath((1, 0, 0, 0))
    assert vershik_successor(od, FinitePath((1, 1, 0, 1))) == FinitePath((0, 0, 1, 1))
    assert vershik_successor(od, FinitePath((1, 1, 1, 1))) is FIBER_MAX


def test_predecessor_examples_binary_odometer():
    od = odometer([2, 2, 2, 2])
    assert vershik_predecessor(od, FinitePath((1, 0, 0, 0))) == FinitePath((0, 0, 0, 0))
    assert vershik_predecessor(od, FinitePath((0, 0, 0, 0))) is FIBER_MIN


def test_successor_predecessor_inverse():
    for seed in range(6):
        od = random_ordered_simple(seed, depth=4)
        for v in range(od.diagram.levels[3]):
            for p in enumerate_fiber(od, 3, v).paths:
                s = vershik_successor(od, p)
                if not isinstance(s, FiberMaximum):
                    assert vershik_predecessor(od, s) == p
                q = vershik_predecessor(od, p)
                if not isinstance(q, FiberMinimum):
                    assert vershik_successor(od, q) == p


def test_successor_preserves_range_vertex():
    for seed in range(6):
        od = random_ordered_simple(seed, depth=4)
        for v in range(od.diagram.levels[4]):
            for p in enumerate_fiber(od, 4, v).paths:
                s = vershik_successor(od, p)
                if not isinstance(s, FiberMaximum):
                    assert path_range(od, s) == path_range(od, p) == v


def test_successor_equals_lex_successor_oracle():
    for seed in range(10):
        od = random_ordered_simple(seed, depth=4)
        for k in range(1, od.depth + 1):
            for v in range(od.diagram.levels[k]):
                oracle = lex_sorted_oracle(od, k, v)
                fiber = enumerate_fiber(od, k, v)
                assert [p.edges for p in fiber.paths] == oracle
                for i, p in enumerate(fiber.paths):
                    s = vershik_successor(od, p)
                    if i + 1 < len(oracle):
                        assert s == FinitePath(oracle[i + 1])
                    else:
                        assert isinstance(s, FiberMaximum)


def test_mixed_radix_odometer_law():
    digits = (2, 3, 2)
    od = odometer(list(digits))
    value = (0, 0, 0)
    p = FinitePath(value)
    for _ in range(2 * 3 * 2 - 1):
        nxt = mixed_radix_increment(digits, p.edges)
        s = vershik_successor(od, p)
        assert s == FinitePath(nxt)
        p = s
    assert vershik_successor(od, p) is FIBER_MAX


def test_orbit_wrap_cycles_through_whole_fiber():
    od = odometer([2, 2, 2])
    start = FinitePath((0, 0, 0))
    orbit = vershik_orbit(od, start, 8, wrap=True)
    assert orbit.paths[-1] == start
    assert len({p.edges for p in orbit.paths}) == 8


def test_orbit_without_wrap_stops_at_maximum():
    od = odometer([2, 2, 2])
    start = fiber_minimum(od, 3, 0)
    orbit = vershik_orbit(od, start, 100, wrap=False)
    assert orbit.hit_boundary
    assert len(orbit.paths) == 8
    assert orbit.paths[-1] == fiber_maximum(od, 3, 0)
    assert len({p.edges for p in orbit.paths}) == 8


def test_orbit_zero_steps():
    od = odometer([2, 2])
    p = FinitePath((1, 0))
    orbit = vershik_orbit(od, p, 0)
    assert orbit.paths == (p,) and not orbit.hit_boundary


def test_metric_is_ultrametric():
    od = odometer([2, 2, 2, 2])
    paths = [p for p in enumerate_fiber(od, 4, 0).paths]
    for a, b, c in itertools.islice(itertools.product(paths, repeat=3), 512):
        assert path_metric(a, c) <= max(path_metric(a, b), path_metric(b, c))
    assert path_metric(paths[0], paths[0]) == 0
    assert path_metric(FinitePath((0, 0)), FinitePath((0, 1))) == Fraction(1, 4)
