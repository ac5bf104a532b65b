import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from packbounds.bounds import (BoundReport, best_scale, bound_L2d, bound_L3d, bound_obpp,
                               bound_spp, clique_requirement, default_battery, improved_2d,
                               improved_3d, l2d_scales, mv_partial_2d, mv_partial_3d,
                               okp_relaxation_bound, spp_battery, transformed_volume,
                               volume_criterion)
from packbounds.dff import IDENTITY, PhiStep, UStep, candidate_params
from packbounds.generate import random_normalized
from packbounds.model import NormalizedInstance, total_volume
from packbounds.oracle import (PackingClass, exact_packable, max_clique, min_bins,
                               min_strip_height, okp_optimum, packing_class_from_placement,
                               find_packing, validate_packing_class)
from packbounds.scales import ConservativeScale

U2 = ConservativeScale.of(UStep(2), UStep(2), UStep(2))


def pairs(inst):
    return itertools.product(candidate_params(inst, 0), candidate_params(inst, 1))


def test_nine_cubes(nine_cubes):
    plain = volume_criterion(nine_cubes, ConservativeScale.identity(3))
    assert plain.volume == F(72, 125) and plain.verdict == "Pass"
    check = volume_criterion(nine_cubes, U2)
    assert check.volume == F(9, 8) and check.verdict == "Infeasible"
    assert bound_obpp(nine_cubes, [U2]) == 2


def test_empty_instance_passes():
    assert not volume_criterion(NormalizedInstance(2, ()), ConservativeScale.identity(2)).infeasible


def test_best_scale_needs_scales(nine_cubes):
    with pytest.raises(ValueError):
        best_scale(nine_cubes, [])


def test_spp_examples():
    inst = NormalizedInstance.from_sizes([(F(1), F(1, 2)), (F(1), F(7, 10))])
    assert bound_spp(inst, [ConservativeScale.identity(2)]) == F(6, 5)
    single = NormalizedInstance.from_sizes([(F(1), F(2, 7))])
    assert bound_spp(single, [ConservativeScale.identity(2)]) == F(2, 7)


def test_obpp_single_box():
    inst = NormalizedInstance.from_sizes([(F(1, 3), F(1, 4))])
    assert bound_obpp(inst, [ConservativeScale.identity(2)]) == 1


def test_three_box_instance(three_boxes):
    assert all(mv_partial_2d(three_boxes, p, q) == 0 for p, q in pairs(three_boxes))
    assert improved_2d(three_boxes, F(1, 2), F(1, 2)) == 2
    report = bound_L2d(three_boxes)
    assert report.value == 2 and report.kind == "OBPP"
    assert math.ceil(transformed_volume(three_boxes, report.scale)) == 2


def test_phi_family_also_attains_two(three_boxes):
    w7 = ConservativeScale.of(PhiStep(F(1, 2)), PhiStep(F(1, 2)))
    assert math.ceil(transformed_volume(three_boxes, w7)) == 2


def test_five_box_instance(five_boxes):
    cands = itertools.product(candidate_params(five_boxes, 0), candidate_params(five_boxes, 1))
    assert all(mv_partial_3d(five_boxes, p, q) <= 1 for p, q in cands)
    assert improved_3d(five_boxes, F(1, 2), F(1, 2)) == 2
    assert bound_L3d(five_boxes).value == 2


def test_single_box_bounds():
    assert bound_L2d(NormalizedInstance.from_sizes([(F(1, 3), F(1, 3))])).value == 1
    assert bound_L3d(NormalizedInstance.from_sizes([(F(1, 3),) * 3])).value == 1


def test_all_in_first_set():
    inst = NormalizedInstance.from_sizes([(F(9, 10), F(4, 5))] * 4)
    assert mv_partial_2d(inst, F(1, 3), F(1, 3)) == 4


def test_improved_2d_empty():
    assert improved_2d(NormalizedInstance(2, ()), F(1, 2), F(1, 2)) == 0


@pytest.mark.parametrize("p", [0, F(3, 5)])
def test_parameter_domain(three_boxes, p):
    with pytest.raises(ValueError):
        mv_partial_2d(three_boxes, p, F(1, 2))


def test_dimension_checked(three_boxes):
    with pytest.raises(ValueError):
        mv_partial_3d(three_boxes, F(1, 2), F(1, 2))


def test_report_kind_checked():
    with pytest.raises(ValueError):
        BoundReport("foo", 1, ConservativeScale.identity(1))


def test_okp_examples():
    one = NormalizedInstance.from_sizes([(F(1, 2), F(1, 2))], values=[5])
    assert okp_relaxation_bound(one, ConservativeScale.identity(2)) == 5
    heavy = ConservativeScale(table={"1": (F(1), F(1)), "2": (F(1), F(1))})
    two = NormalizedInstance.from_sizes([(F(1), F(1)), (F(1), F(1))], values=[3, 4])
    assert okp_relaxation_bound(two, heavy) == 4
    with pytest.raises(ValueError):
        okp_relaxation_bound(NormalizedInstance.from_sizes([(F(1, 2),)]), ConservativeScale.identity(1))


def test_clique_requirement():
    inst = NormalizedInstance.from_sizes([(F(9, 10),), (F(7, 10),), (F(7, 10),)])
    assert clique_requirement(inst.boxes, ConservativeScale.identity(1), 0) == 3
    assert clique_requirement(inst.boxes[:1], ConservativeScale.identity(1), 0) == 1


def test_spp_battery_keeps_strip_axis():
    inst = random_normalized(3, 5, 1, grid=6)
    assert all(s.dffs[-1] == IDENTITY for s in spp_battery(inst))


# --- random suites -----------------------------------------------------------------------

def suite(dim, n_max, count, grid=5, values=False):
    for seed in range(count):
        n = 1 + seed % n_max
        yield random_normalized(dim, n, 1000 * dim + seed, grid=grid, values=values)


@pytest.mark.parametrize("inst", list(suite(2, 5, 40)), ids=lambda _: "")
def test_obpp_bounds_below_bin_optimum_2d(inst):
    opt = min_bins(inst)
    assert bound_L2d(inst).value <= opt
    assert bound_obpp(inst, default_battery(inst)) <= opt
    assert bound_L2d(inst).value >= math.ceil(total_volume(inst.boxes))
    assert bound_L2d(inst).value >= max(mv_partial_2d(inst, p, q) for p, q in pairs(inst))


@pytest.mark.parametrize("inst", list(suite(3, 5, 30)), ids=lambda _: "")
def test_obpp_bounds_below_bin_optimum_3d(inst):
    assert bound_L3d(inst).value <= min_bins(inst)


@pytest.mark.parametrize("inst", list(suite(2, 5, 30)), ids=lambda _: "")
def test_spp_below_strip_optimum(inst):
    plain = bound_spp(inst, [ConservativeScale.identity(2)])
    value = bound_spp(inst, [ConservativeScale.identity(2), ConservativeScale.of(UStep(1), IDENTITY)])
    assert plain <= value <= min_strip_height(inst)
    assert bound_spp(inst, spp_battery(inst)) <= min_strip_height(inst)


@pytest.mark.parametrize("inst", list(suite(2, 5, 30, values=True)), ids=lambda _: "")
def test_okp_above_optimum(inst):
    opt = okp_optimum(inst)
    for s in default_battery(inst)[:12]:
        assert okp_relaxation_bound(inst, s) >= opt


@pytest.mark.parametrize("inst", list(suite(2, 4, 40)), ids=lambda _: "")
def test_clique_requirement_met_by_packing_classes(inst):
    placement = find_packing(inst)
    if placement is None:
        return
    pc = packing_class_from_placement(inst, placement)
    assert validate_packing_class(pc, inst).valid
    for s in default_battery(inst)[:10]:
        for i in range(2):
            for r in range(1, len(inst.boxes) + 1):
                for group in itertools.combinations(inst.boxes, r):
                    ids = {b.id for b in group}
                    edges = [e for e in pc.edges[i] if e <= ids]
                    assert max_clique(sorted(ids), edges) >= clique_requirement(group, s, i)


@pytest.mark.parametrize("inst", list(suite(2, 5, 60)), ids=lambda _: "")
def test_volume_criterion_sound(inst):
    for s in default_battery(inst):
        if volume_criterion(inst, s).infeasible:
            assert not exact_packable(inst)
            break


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8), st.data())
def test_adding_scales_never_lowers_bounds(seed, n, data):
    inst = random_normalized(2, n, seed, grid=10)
    battery = default_battery(inst)
    k = data.draw(st.integers(1, len(battery)))
    assert bound_obpp(inst, battery[:k]) <= bound_obpp(inst, battery)
    spp = spp_battery(inst)
    j = data.draw(st.integers(1, len(spp)))
    assert bound_spp(inst, spp[:j]) <= bound_spp(inst, spp)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 10), st.integers(2, 3))
def test_improved_dominates_partial(seed, n, d):
    inst = random_normalized(d, n, seed, grid=12)
    for p, q in pairs(inst):
        if d == 2:
            assert improved_2d(inst, p, q) >= mv_partial_2d(inst, p, q)
        else:
            assert improved_3d(inst, p, q) >= mv_partial_3d(inst, p, q)


def test_l2d_witness_is_reproducible(three_boxes):
    report = bound_L2d(three_boxes)
    members = {(f, p): s for f, p, s in l2d_scales(three_boxes)}
    assert members[(report.family, report.params)] == report.scale
