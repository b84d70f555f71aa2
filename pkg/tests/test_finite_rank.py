from fractions import Fraction as Fr
import random

from hypothesis import given, settings, strategies as st
import pytest

from knead.errors import DegreeTooSmall
from knead.finite_rank import (CoordinateForm, FiniteRankPair, RankOneTerm, StepForm,
                               check_multiplicativity, dense_traces, pair_determinant,
                               pair_matrix, pair_traces, perturbed_root_bound,
                               random_pair, selftest)
from knead.kneading import kneading_pair
from knead.pm_domain import FormalVector, validate
from knead.series import TruncatedSeries

P0 = Fr(1, 3)


def zero_pair(value):
    return FiniteRankPair(lambda x: None,
                          [RankOneTerm(StepForm.point_mass(P0, value), FormalVector.point(P0))])


def identity_pair():
    return FiniteRankPair(lambda x: (x, 1),
                          [RankOneTerm(StepForm.point_mass(P0), FormalVector.point(P0))])


EMPTY = FiniteRankPair(lambda x: None, [])


def test_pair_matrix_examples():
    assert pair_matrix(zero_pair(3), 6).to_strings() == [[["3", "0", "0", "0", "0", "0", "0"]]]
    assert pair_matrix(identity_pair(), 5).to_strings() == [[["1"] * 6]]


def test_pair_determinant_examples():
    assert pair_determinant(zero_pair(3), 8) == TruncatedSeries([1, -3], 8)
    expected = TruncatedSeries([1, -2], 8) / TruncatedSeries([1, -1], 8)
    assert pair_determinant(identity_pair(), 8) == expected
    assert pair_determinant(EMPTY, 8) == TruncatedSeries.one(8)


def test_pair_traces_examples():
    doubling = validate([(0, 1)], [0, "1/2", 1], [(2, 0), (2, -1)])
    assert pair_traces(kneading_pair(doubling, signed=True), 10) == [2 ** n for n in range(1, 11)]
    assert pair_traces(EMPTY, 5) == [0] * 5
    tent = validate([(0, 1)], [0, "1/2", 1], [(2, 0), (-2, 2)])
    assert pair_traces(kneading_pair(tent, signed=False), 10) == [0] * 10
    with pytest.raises(DegreeTooSmall):
        pair_traces(EMPTY, 5, degree=3)


def test_selftest_fifty_pairs():
    results = selftest(count=50, seed=0, n_max=10, degree=32)
    assert len(results) == 50
    assert all(r.traces_ok and r.duality_ok for r in results)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_pairs_against_dense(seed):
    P, pts = random_pair(random.Random(seed))
    assert pair_traces(P, 8, 12) == dense_traces(P, pts, 8)
    det = pair_determinant(P, 12)
    assert det == TruncatedSeries.from_traces(pair_traces(P, 12, 12), 12)


def test_multiplicativity_controls():
    assert check_multiplicativity(EMPTY, EMPTY, EMPTY, 16).ok
    a, b = zero_pair(2), identity_pair()
    prod = pair_determinant(a, 16) * pair_determinant(b, 16)
    assert check_multiplicativity(a, prod, b, 16).ok
    coeffs = list(pair_determinant(b, 16).coeffs)
    coeffs[5] += 1
    report = check_multiplicativity(a, prod, TruncatedSeries(coeffs, 16), 16)
    assert not report.ok and report.first_failure == 5


def test_perturbed_root_bound_tent():
    tent = validate([(0, 1)], [0, "1/2", 1], [(2, 0), (-2, 2)])
    P = kneading_pair(tent, signed=True)
    r = perturbed_root_bound(P, CoordinateForm(), FormalVector([(1, 1), (0, -1)]), 24)
    assert r.identity_ok and r.forced and r.bound_ok
    assert abs(r.predicted_modulus - 0.5) < 1e-3 and abs(r.root_modulus - 0.5) < 1e-9


def test_perturbed_root_bound_contraction():
    F = validate([(0, 1)], [0, 1], [("1/2", 0)])
    r = perturbed_root_bound(kneading_pair(F, True), CoordinateForm(),
                             FormalVector([(1, 1), (0, -1)]), 24)
    assert r.identity_ok and not r.forced and r.note == "no root forced"


def test_perturbed_root_bound_dying_orbit():
    r = perturbed_root_bound(zero_pair(1), StepForm.point_mass(P0), FormalVector.point(P0), 10)
    assert r.identity_ok
