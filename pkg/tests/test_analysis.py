import json
from fractions import Fraction
from math import comb, log

import pytest
from hypothesis import given, strategies as st

from gklab.analysis import GrowthClass, InsufficientData, classify_growth, estimate_gkdim
from gklab.growth import growth_sequence, make_frame
from gklab.zoo import load_zoo, parse_list


def test_classify_examples():
    assert classify_growth([1, 2, 3, 4, 5, 6, 7], 3, 4) == GrowthClass.polynomial(1)
    assert classify_growth([1, 3, 6, 10, 15, 21, 28]) == GrowthClass.polynomial(2)
    assert classify_growth([1, 3, 7, 15, 31, 63]) == GrowthClass.exponential()


def test_estimate_examples():
    est = estimate_gkdim([1, 3, 6, 10, 15, 21, 28, 36, 45])
    assert str(est.dim) == "2" and est.exact and not est.suspect_gap
    bounded = estimate_gkdim([1, 4, 4, 4, 4, 4])
    assert str(bounded.dim) == "0" and bounded.growth_class.kind == "bounded"


def test_inconclusive_near_three_halves_is_flagged():
    # 10 terms, last 27 = 9^1.5: no finite-difference or ratio pattern fires
    d = [1, 2, 4, 6, 9, 12, 16, 20, 23, 27]
    est = estimate_gkdim(d)
    assert est.growth_class.kind == "inconclusive"
    assert not est.exact
    assert est.dim.value == Fraction(15000, 10000)
    assert est.suspect_gap


def test_loglog_is_four_decimal_rational():
    d = [1, 2, 4, 6, 9, 12, 16, 20, 23, 30]
    est = classify_growth(d)
    assert est.loglog_estimate == Fraction(round(log(30) / log(9) * 10_000), 10_000)
    assert 10_000 % est.loglog_estimate.denominator == 0


def test_insufficient_data():
    with pytest.raises(InsufficientData):
        classify_growth([1, 2, 3])
    with pytest.raises(ValueError):
        classify_growth([1, 2, 3, 4, 5], window=2)


def test_json_shape():
    out = estimate_gkdim([1, 3, 6, 10, 15, 21, 28]).to_json()
    assert out == {"class": "polynomial", "degree": 2, "dim": "2", "exact": True, "suspect_gap": False, "window_used": 3}
    assert estimate_gkdim([1, 3, 7, 15, 31, 63]).to_json()["dim"] == "inf"
    json.dumps(estimate_gkdim([1, 2, 4, 6, 9, 12, 16, 20, 23, 27]).to_json())


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_binomial_sequences(k):
    window = 3
    n = k + window + 2
    assert classify_growth([comb(i + k, k) for i in range(n + 1)], window, 6) == GrowthClass.polynomial(k)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("junk", [[7], [0, 9], [5, 5, 1]])
def test_prefix_invariance(k, junk):
    d = [comb(i + k, k) for i in range(14)]
    assert classify_growth(junk + d) == classify_growth(d) == GrowthClass.polynomial(k)
    e = [2**i for i in range(12)]
    assert classify_growth(junk + e) == classify_growth(e)


@given(st.lists(st.integers(0, 10**6), min_size=4, max_size=15))
def test_classifier_fired_value_never_in_gap(d):
    est = estimate_gkdim(d)
    if est.dim.is_finite and 1 < est.dim.value < 2:
        assert not est.exact and est.suspect_gap
    if est.exact:
        assert not est.suspect_gap


@pytest.mark.parametrize(
    "entry",
    [e for e in load_zoo() if "commutative" in e.source and not e.is_module],
    ids=lambda e: e.name,
)
def test_commutative_zoo_dims_are_integers(entry):
    p = entry.presentation()
    d = growth_sequence(p, make_frame(p, parse_list(entry.frame, p)), 10)
    est = estimate_gkdim(d)
    assert est.exact and est.dim.is_finite and est.dim.value.denominator == 1
