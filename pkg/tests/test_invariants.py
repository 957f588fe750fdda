"""Return windows, subshift coding, telescoping invariance, the pipeline."""

import json
import random

import pytest

from bratteli import (
    CylinderFamily,
    Distinguished,
    FinitePath,
    IndistinguishableAtDepth,
    ReductionParams,
    conjugacy_window_check,
    odometer,
    pipeline_report,
    reduction_pipeline,
    ret_code,
    skau_order,
    telescope_path_bijection,
    vershik_return_window,
)
from bratteli.invariants import _orbit_paths
from bratteli.vershik import FiberMaximum, vershik_successor

from conftest import random_ordered_simple


def odometer_window_oracle(cyl: tuple[int, ...], n: int, offset: int = 0) -> list[int]:
    """Binary odometer oracle: the i-th iterate of the all-ones base point is
    the binary expansion of i - 1 (the base point codes -1), so membership in
    a cylinder is digit agreement of (i - 1) mod 2**depth."""
    j = len(cyl)
    word = []
    for i in range(-n, n + 1):
        value = (i + offset - 1) % (1 << j)
        digits = tuple((value >> b) & 1 for b in range(j))
        word.append(1 if digits == cyl else 0)
    return word


def test_odometer_window_frozen_and_oracle():
    od = odometer([2, 2, 2], 4)
    w = vershik_return_window(od, FinitePath((0,)), 4)
    assert w == [0, 1, 0, 1, 0, 1, 0, 1, 0]
    assert w == odometer_window_oracle((0,), 4)


def test_odometer_window_depth_two_cylinders():
    od = odometer([2, 2, 2, 2], 4)
    for cyl in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        w = vershik_return_window(od, FinitePath(cyl), 9)
        assert w == odometer_window_oracle(cyl, 9)


def test_whole_space_cylinder_gives_all_ones():
    od = odometer([2, 2, 2], 3)
    assert vershik_return_window(od, FinitePath(()), 3) == [1] * 7


def test_window_base_point_bit():
    od = odometer([2, 2], 4)
    # index 0 is 1 exactly when the maximal path starts with the cylinder
    assert vershik_return_window(od, FinitePath((1,)), 2)[2] == 1
    assert vershik_return_window(od, FinitePath((0,)), 2)[2] == 0


def test_window_shift_equivariance():
    od = odometer([2, 2, 2], 4)
    for cyl in [(0,), (1, 1)]:
        base = vershik_return_window(od, FinitePath(cyl), 6)
        shifted = vershik_return_window(od, FinitePath(cyl), 6, base_offset=1)
        assert shifted[:-1] == base[1:]


def test_window_equivariance_random_diagrams():
    for seed in range(5):
        od = skau_order(random_ordered_simple(seed, depth=4).diagram, 4)
        cyl = FinitePath((od.fiber_edges(1, 0)[0],))
        base = vershik_return_window(od, cyl, 8)
        shifted = vershik_return_window(od, cyl, 8, base_offset=1)
        assert shifted[:-1] == base[1:]


def test_windows_need_a_proper_ordering():
    from conftest import crossing_chains_ordered
    from bratteli import OrderedBratteliDiagram

    d, ranks = crossing_chains_ordered(depth=5)
    od = OrderedBratteliDiagram(d, ranks)
    with pytest.raises(ValueError):
        vershik_return_window(od, FinitePath((0,)), 3)


def test_ret_code_depth_one_partition():
    od = odometer([2, 2, 2], 4)
    fam = CylinderFamily(od, (FinitePath((0,)), FinitePath((1,))))
    code = ret_code(od, fam, 5)
    for letter in code:
        assert sum(letter) == 1  # depth-1 cylinders partition the space
    parity = vershik_return_window(od, FinitePath((0,)), 5)
    assert [letter[0] for letter in code] == parity


def test_ret_code_shift_equivariance():
    od = odometer([2, 2, 2], 4)
    fam = CylinderFamily(od, (FinitePath((0, 0)), FinitePath((1, 1))))
    base = ret_code(od, fam, 6)
    shifted = ret_code(od, fam, 6, base_offset=1)
    assert shifted[:-1] == base[1:]


def test_ret_code_letters_determined_by_prefixes():
    od = odometer([2, 2, 2, 2], 5)
    cylinders = tuple(FinitePath(c) for c in [(0, 0), (1, 0), (0, 1), (1, 1)])
    fam = CylinderFamily(od, cylinders)
    code = ret_code(od, fam, 7)
    _, orbit = _orbit_paths(od, 7, 2)
    for i in range(-7, 8):
        for i2 in range(i + 1, 8):
            same_letter = code[i + 7] == code[i2 + 7]
            same_prefix = orbit[i].edges[:2] == orbit[i2].edges[:2]
            assert same_letter == same_prefix


def test_cylinder_family_validation():
    od = odometer([2, 2], 2)
    with pytest.raises(ValueError):
        CylinderFamily(od, (FinitePath((0,)), FinitePath((0,))))
    with pytest.raises(ValueError):
        CylinderFamily(od, (FinitePath((5,)),))


def test_path_bijection_intertwines_successor():
    for seed in range(12):
        od = random_ordered_simple(seed, depth=4)
        cuts = (0, 2, 4)
        from bratteli import enumerate_fiber, lex_telescope

        ot = lex_telescope(od, cuts)
        for v in range(od.diagram.levels[4]):
            for p in enumerate_fiber(od, 4, v).paths:
                q = telescope_path_bijection(od, cuts, p)
                sp = vershik_successor(od, p)
                sq = vershik_successor(ot, q)
                if isinstance(sp, FiberMaximum):
                    assert isinstance(sq, FiberMaximum)
                else:
                    assert telescope_path_bijection(od, cuts, sp) == sq


def test_conjugacy_window_identity_cuts():
    od = odometer([2, 2, 2], 3)
    fam = CylinderFamily(od, (FinitePath((0,)), FinitePath((1,))))
    report = conjugacy_window_check(od, (0, 1, 2, 3), fam, 8)
    assert report.passed


def test_conjugacy_window_odometer_pairs():
    od = odometer([2, 2, 2, 2], 4)
    fam = CylinderFamily(
        od, tuple(FinitePath(c) for c in [(0, 0), (1, 0), (0, 1), (1, 1)])
    )
    report = conjugacy_window_check(od, (0, 2, 4), fam, 16)
    assert report.passed


def test_conjugacy_window_random_skau_batch():
    from bratteli import enumerate_fiber

    rng = random.Random(5)
    for seed in range(8):
        od = skau_order(random_ordered_simple(seed, depth=5).diagram, 5)
        depth = od.depth
        if depth < 2:
            continue
        inner = sorted(rng.sample(range(1, depth), min(1, depth - 1)))
        cuts = (0, *inner, depth)
        fiber = enumerate_fiber(od, cuts[1], 0)
        cylinders = {fiber.paths[0], fiber.paths[-1]}
        fam = CylinderFamily(od, tuple(sorted(cylinders, key=lambda p: p.edges)))
        report = conjugacy_window_check(od, cuts, fam, 32)
        assert report.passed, report.failures


def test_bijection_requires_cut_depth():
    od = odometer([2, 2, 2], 3)
    with pytest.raises(ValueError):
        telescope_path_bijection(od, (0, 2, 3), FinitePath((0,)))


# ---------------------------------------------------------------------------
# pipeline


P = (0,) * 8
Q = (1,) * 8
G = (0, 1) * 4
PARAMS = ReductionParams(gamma_path=G, shift_range=1, boolean_depth=2, precision_cap=300)


def test_pipeline_equal_families_indistinguishable():
    result = reduction_pipeline([P], [P], PARAMS)
    assert isinstance(result, IndistinguishableAtDepth)
    assert result.identical


def test_pipeline_distinct_paths_distinguished():
    result = reduction_pipeline([P], [Q], PARAMS)
    assert isinstance(result, Distinguished)
    # the witness is certified distinct from every density on the other side
    from bratteli import certified_sign, density_set
    from bratteli.circle import ReturnAlgebraSpec
    from bratteli.reals import qtree_reals

    (gamma,) = qtree_reals([G])
    other = density_set(ReturnAlgebraSpec(gamma, qtree_reals([Q]), 1, 2))
    side_vals = other if result.side == "left" else density_set(
        ReturnAlgebraSpec(gamma, qtree_reals([P]), 1, 2)
    )
    for u in side_vals:
        assert certified_sign(result.witness - u, 300) != 0


def test_pipeline_superset_family_distinguished():
    result = reduction_pipeline([P, Q], [P], PARAMS)
    assert isinstance(result, Distinguished)


def test_pipeline_soundness_on_equal_sets():
    rng = random.Random(9)
    for _ in range(4):
        paths = {tuple(rng.randint(0, 1) for _ in range(6)) for _ in range(3)}
        paths.discard(G[:6])
        if not paths:
            continue
        params = ReductionParams(gamma_path=(0, 1, 1, 0, 1, 0), shift_range=1, boolean_depth=1)
        result = reduction_pipeline(sorted(paths), sorted(paths), params)
        assert isinstance(result, IndistinguishableAtDepth)


def test_pipeline_rejects_gamma_in_families():
    with pytest.raises(ValueError):
        reduction_pipeline([G], [Q], PARAMS)


def test_pipeline_report_is_json():
    result = reduction_pipeline([P], [Q], PARAMS)
    payload = json.loads(pipeline_report([P], [Q], PARAMS, result))
    assert payload["verdict"] == "Distinguished"
    assert payload["inputs"]["gamma_path"] == "01010101"
    assert "witness" in payload
