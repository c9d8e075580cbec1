from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from normalzeta.fppoints import legendre, primes_up_to
from normalzeta.porc import (
    InsufficientData,
    PrimeSeries,
    cubic_series,
    divided_difference,
    fit,
    format_poly,
    interpolate,
    quadric_series,
    roots_series,
    scan,
    series_from,
)


def test_constant_series():
    s = series_from(lambda p: 7, 50)
    f = fit(s, 1, 0)
    assert f.ok and f.classes == {0: [7]}


def test_quadric_series_fit():
    s = quadric_series("y1^2+y2^2", 97, pmin=5)
    assert all(v == 1 + legendre(-1, p) for p, v in s.entries)
    f = fit(s, 4, 0)
    assert f.ok and f.classes == {1: [2], 3: [0]}


def test_cubic_witness_mod_9():
    f = fit(cubic_series(10 ** 4), 9, 1)
    assert not f.ok
    w = f.witness
    assert len(w.points) == 3 and w.divided_difference != 0
    assert all(p % 9 == w.residue for p, _ in w.points)
    # class 1 mod 9 mixes the values 0 and 3 as well
    one = next(x for x in f.witnesses if x.residue == 1)
    assert {v for _, v in one.points} == {0, 3}


def test_primes_one_mod_nine():
    # 19 and 37 are not of the form a^2 + 27 b^2; 109 = 1 + 27*4 is
    s = dict(cubic_series(200).entries)
    assert (s[19], s[37], s[73], s[109]) == (0, 0, 0, 3)
    assert s[31] == 3 and 31 % 9 == 4


def test_insufficient_data():
    s = PrimeSeries.of([(5, 1), (7, 0), (11, 1)])
    with pytest.raises(InsufficientData):
        fit(s, 4, 1)


def test_series_must_increase():
    with pytest.raises(ValueError):
        PrimeSeries.of([(7, 1), (5, 1)])


def test_interpolate_and_divided_difference():
    pts = [(2, 5), (3, 10), (5, 26)]  # p^2 + 1
    assert interpolate(pts) == [1, 0, 1]
    assert divided_difference(pts + [(7, 50)]) == 0
    assert divided_difference(pts + [(7, 51)]) != 0
    assert format_poly([1, 0, 1]) == "p^2+1"
    assert format_poly([Fraction(-1, 2), 3]) == "3*p-1/2"


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4), st.sampled_from([1, 2, 3, 4, 6]))
def test_porc_by_construction_is_found(coeffs, N):
    # one polynomial per class, degree < len(coeffs)
    def g(p):
        r = p % N
        return sum(c * (r + 1) * p ** k for k, c in enumerate(coeffs))

    s = series_from(g, 400)
    D = len(coeffs) - 1
    rep = scan(s, N, D)
    assert rep.found
    f = rep.first_fit
    assert f.N <= N and f.D <= D
    # soundness: the fit reproduces every entry
    for p, v in s.entries:
        assert f.evaluate(p) == v


def test_scan_examples():
    rep = scan(quadric_series("y1^2+y2^2", 1000), 8, 1)
    assert rep.found and (rep.first_fit.N, rep.first_fit.D) == (4, 0)
    assert rep.first_fit.classes == {1: [2], 3: [0]}
    rep = scan(roots_series("x^2+1", 1000), 8, 0)
    assert rep.found and rep.first_fit.N == 4
    rep = scan(series_from(lambda p: p * p + 1, 300), 4, 3)
    assert (rep.first_fit.N, rep.first_fit.D) == (1, 2)


def test_scan_cubic_no_fit():
    rep = scan(cubic_series(20000), 12, 2)
    assert not rep.found
    assert sorted(rep.witnesses) == list(range(1, 13))
    assert "no PORC fit with N <= 12, D <= 2" in rep.to_tsv()


def test_scan_is_deterministic():
    s = cubic_series(5000)
    assert scan(s, 6, 1).to_tsv() == scan(s, 6, 1).to_tsv()


def test_witnesses_are_certificates():
    rep = scan(cubic_series(20000), 10, 2)
    for w in rep.witnesses.values():
        assert divided_difference(w.points) == w.divided_difference != 0
