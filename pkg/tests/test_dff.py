from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from packbounds.dff import (IDENTITY, Compose, Convex, PhiStep, Threshold, UStep,
                            candidate_params, evaluate, parse_dff)
from packbounds.model import NormalizedInstance
from packbounds.oracle import check_dff

unit = st.fractions(min_value=0, max_value=1, max_denominator=60)
halves = st.fractions(min_value=0, max_value=F(1, 2), max_denominator=40)
open_halves = halves.filter(lambda e: e > 0)


def test_ustep_examples():
    assert UStep(2)(F(2, 5)) == F(1, 2)
    assert UStep(1)(F(1, 2)) == F(1, 2)


def test_threshold_examples():
    f = Threshold(F(3, 10))
    assert [f(F(1, 5)), f(F(1, 2)), f(F(4, 5))] == [0, F(1, 2), 1]
    # 3/4 lies above 1 - 3/10, so it is rounded up
    assert f(F(3, 4)) == 1


def test_threshold_boundaries_keep_x():
    f = Threshold(F(3, 10))
    assert f(F(3, 10)) == F(3, 10) and f(F(7, 10)) == F(7, 10)


def test_phistep_examples():
    f = PhiStep(F(1, 3))
    assert [f(F(3, 5)), f(F(2, 5)), f(F(1, 4))] == [F(2, 3), F(1, 3), 0]


@pytest.mark.parametrize("make, bad", [
    (UStep, 0), (Threshold, F(3, 5)), (Threshold, F(-1, 5)), (PhiStep, 0), (PhiStep, F(2, 3)),
])
def test_parameter_domains(make, bad):
    with pytest.raises(ValueError):
        make(bad)


def test_convex_weights_must_sum_to_one():
    with pytest.raises(ValueError):
        Convex(((F(1, 2), IDENTITY), (F(1, 3), UStep(2))))
    with pytest.raises(ValueError):
        Convex(((F(3, 2), IDENTITY), (F(-1, 2), UStep(2))))


def test_out_of_range_argument():
    with pytest.raises(ValueError):
        evaluate(UStep(1), F(3, 2))


@pytest.mark.parametrize("text", [
    "id", "u(3)", "U(0)", "U(1/3)", "phi(1/2)", "compose(u(1),U(1/3))",
    "convex(1/2*u(2)+1/2*id)", "compose(phi(1/4),convex(1/3*U(1/5)+2/3*u(1)))",
])
def test_text_round_trip(text):
    assert str(parse_dff(text)) == text
    assert parse_dff(str(parse_dff(text))) == parse_dff(text)


@pytest.mark.parametrize("text", ["u(0)", "phi(0)", "foo(1)", "compose(id)", "u(1/2", ""])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_dff(text)


@given(st.integers(1, 8), unit, unit)
def test_ustep_monotone(k, x, y):
    lo, hi = sorted((x, y))
    assert UStep(k)(lo) <= UStep(k)(hi)


@given(halves, unit, unit)
def test_threshold_monotone(e, x, y):
    lo, hi = sorted((x, y))
    assert Threshold(e)(lo) <= Threshold(e)(hi)


@given(open_halves, unit, unit)
def test_phistep_monotone(e, x, y):
    lo, hi = sorted((x, y))
    assert PhiStep(e)(lo) <= PhiStep(e)(hi)


@given(st.integers(1, 8), halves, open_halves)
def test_endpoints(k, e, p):
    for f in (UStep(k), Threshold(e), PhiStep(p)):
        assert f(F(0)) == 0 and f(F(1)) == 1


@given(st.integers(1, 10), st.integers(0, 11))
def test_ustep_fixed_points(k, j):
    x = F(j, k + 1)
    if x <= 1:
        assert UStep(k)(x) == x


@given(st.integers(1, 6), open_halves, unit)
def test_values_stay_in_unit_interval(k, e, x):
    for f in (UStep(k), Threshold(e), PhiStep(e), Compose(PhiStep(e), UStep(k)),
              Convex(((F(1, 3), UStep(k)), (F(2, 3), Threshold(e))))):
        assert 0 <= f(x) <= 1


def test_compose_and_convex_evaluate():
    f = Compose(UStep(2), Threshold(F(1, 4)))
    assert f(F(2, 5)) == UStep(2)(F(2, 5))
    assert f(F(1, 5)) == 0
    g = Convex(((F(1, 2), IDENTITY), (F(1, 2), UStep(2))))
    assert g(F(2, 5)) == F(9, 20)


def test_closure_passes_oracle():
    f = Compose(PhiStep(F(1, 3)), Convex(((F(1, 2), UStep(3)), (F(1, 2), Threshold(F(1, 5))))))
    assert check_dff(f, 12).holds


def test_candidate_params_five_boxes(five_boxes):
    cands = candidate_params(five_boxes, 0)
    assert F(1, 3) in cands and F(1, 2) in cands
    assert all(0 < c <= F(1, 2) for c in cands)


def test_candidate_params_single_box():
    inst = NormalizedInstance.from_sizes([(F(1, 2), F(1, 3))])
    assert candidate_params(inst, 0) == [F(1, 2)]


def test_candidate_params_full_width_box():
    inst = NormalizedInstance.from_sizes([(F(1), F(1))])
    assert candidate_params(inst, 1) == [F(1, 2)]
