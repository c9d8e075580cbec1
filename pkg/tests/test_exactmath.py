from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from normalzeta.exactmath import (
    Poly,
    RatFunc,
    SeriesError,
    euler_factor,
    gauss_binomial,
    monomial,
    ratfunc_equal,
    series_expand,
    truncated_series,
    var,
    zeta_Zpd,
)

X, Y = var(0), var(1)


def P(d):
    return Poly(d)


def test_euler_factor_examples():
    assert euler_factor(1, 0) == RatFunc(Poly.const(1), 1 - Y)
    assert euler_factor(3, 4) == RatFunc(Poly.const(1), 1 - P({(4, 3): 1}))
    assert zeta_Zpd(3) == RatFunc(Poly.const(1), (1 - Y) * (1 - X * Y) * (1 - X * X * Y))


def test_euler_factor_rejects_a0():
    with pytest.raises(ValueError):
        euler_factor(0, 1)


def test_gauss_binomial_examples():
    assert gauss_binomial(2, 1) == 1 + X
    assert gauss_binomial(3, 2) == 1 + X + X * X
    assert gauss_binomial(4, 2) == P({(0, 0): 1, (1, 0): 1, (2, 0): 2, (3, 0): 1, (4, 0): 1})
    with pytest.raises(ValueError):
        gauss_binomial(3, 4)


def _subspace_count(n, k, p):
    # distinct spans of k independent vectors in F_p^n
    vecs = [v for v in product(range(p), repeat=n)]

    def rank(rows):
        rows = [list(r) for r in rows]
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = pow(rows[r][c], -1, p)
            for i in range(len(rows)):
                if i != r and rows[i][c] % p:
                    f = rows[i][c] * inv
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
            r += 1
        return r

    seen = set()
    for basis in product(vecs, repeat=k):
        if rank(basis) < k:
            continue
        span = frozenset(
            tuple(sum(c * b[i] for c, b in zip(cs, basis)) % p for i in range(n))
            for cs in product(range(p), repeat=k)
        )
        seen.add(span)
    return len(seen)


@pytest.mark.parametrize("n,k,p", [(2, 1, 2), (2, 1, 3), (3, 1, 2), (3, 2, 2), (3, 1, 3), (4, 2, 2), (2, 1, 7)])
def test_gauss_binomial_counts_subspaces(n, k, p):
    g = gauss_binomial(n, k)
    assert g.evaluate([p, 0]) == _subspace_count(n, k, p)


@pytest.mark.parametrize("n", range(6))
def test_gauss_binomial_at_one(n):
    from math import comb

    for k in range(n + 1):
        assert gauss_binomial(n, k).evaluate([1, 0]) == comb(n, k)


def test_series_examples():
    assert series_expand(RatFunc(Poly.const(1), 1 - Y), 5, 3) == [1, 1, 1, 1]
    assert series_expand(zeta_Zpd(3), 2, 2) == [1, 7, 35]
    assert series_expand(euler_factor(3, 2), 3, 3) == [1, 0, 0, 9]


def test_series_rejects_vanishing_constant():
    with pytest.raises(SeriesError):
        series_expand(RatFunc(Poly.const(1), Y), 3, 2)
    # constant term 2 - X vanishes at X = 2
    with pytest.raises(SeriesError):
        series_expand(RatFunc(Poly.const(1), 2 - X + Y), 2, 2)


def test_ratfunc_equal_examples():
    assert ratfunc_equal(RatFunc(1 - Y * Y, 1 - Y), RatFunc(1 + Y))
    assert ratfunc_equal(RatFunc(Poly.const(1), 1 - X * Y), RatFunc(Poly.const(1), 1 - Y * X))
    assert not ratfunc_equal(RatFunc(Poly.const(1), 1 - Y), RatFunc(Poly.const(1), 1 - X * Y))


def test_laurent_substitution_clears():
    # F(X) = X/(1-X) at X -> p^-1 T^-2 * p T^3 = T
    f = RatFunc(var(0, 3), 1 - var(0, 3))
    m = P({(-1, -2): 1}) * P({(1, 3): 1})
    g = f.substitute([m, Y, Poly.const(1)])
    assert g == RatFunc(Y, 1 - Y)
    h = RatFunc(Poly.const(1), 1 - P({(-1, 1): 1}))
    assert truncated_series(h, (0, 1), 2) == 1 + P({(-1, 1): 1}) + P({(-2, 2): 1})


def test_division_and_powers():
    f = RatFunc(1 + X, 1 - Y)
    assert f / f == RatFunc(Poly.const(1))
    assert f ** 2 * f ** -2 == RatFunc(Poly.const(1))
    with pytest.raises(ZeroDivisionError):
        f / RatFunc(Poly.const(0))


# property tests

small_coeff = st.integers(-3, 3)
exps = st.tuples(st.integers(0, 2), st.integers(0, 3))


@st.composite
def polys(draw, min_terms=0):
    coeff = small_coeff.filter(bool) if min_terms else small_coeff
    terms = draw(st.dictionaries(exps, coeff, min_size=min_terms, max_size=4))
    return Poly(terms)


@st.composite
def ratfuncs(draw):
    num = draw(polys())
    den = Poly.const(1)
    for _ in range(draw(st.integers(0, 2))):
        a = draw(st.integers(1, 3))
        b = draw(st.integers(0, 2))
        den = den * (1 - draw(st.sampled_from([1, -1, 2])) * monomial((b, a)))
    return RatFunc(num, den)


def _convolve(a, b, K):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(K + 1)]


@settings(max_examples=60, deadline=None)
@given(ratfuncs(), ratfuncs(), st.sampled_from([2, 3, 5]))
def test_series_of_product_is_convolution(f, g, p):
    K = 5
    assert series_expand(f * g, p, K) == _convolve(series_expand(f, p, K), series_expand(g, p, K), K)


@settings(max_examples=60, deadline=None)
@given(ratfuncs(), ratfuncs(), st.sampled_from([2, 3]))
def test_series_of_sum_is_sum(f, g, p):
    K = 4
    a, b = series_expand(f, p, K), series_expand(g, p, K)
    assert series_expand(f + g, p, K) == [x + y for x, y in zip(a, b)]


@settings(max_examples=40, deadline=None)
@given(ratfuncs(), ratfuncs(), polys(min_terms=1))
def test_equality_is_an_equivalence(f, g, h):
    assert ratfunc_equal(f, f)
    # f and the same function rewritten with an extra common factor
    f2 = RatFunc(f.numerator * h, None) / RatFunc(h) * RatFunc(Poly.const(1), f.den_poly())
    assert ratfunc_equal(f, f2) and ratfunc_equal(f2, f)
    if ratfunc_equal(f, g):
        assert ratfunc_equal(g, f2)
    assert ratfunc_equal(f + g - g, f)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3), st.sampled_from([2, 3, 5, 7]))
def test_euler_factor_series(a, b, p):
    K = 9
    s = series_expand(euler_factor(a, b), p, K)
    want = [p ** (b * (k // a)) if k % a == 0 else 0 for k in range(K + 1)]
    assert s == want


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_poly_evaluation_is_a_ring_map(f, g, pt):
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt)
    assert (f - g).evaluate(pt) == f.evaluate(pt) - g.evaluate(pt)


def test_exact_coefficients():
    f = RatFunc(Poly.const(Fraction(1, 3)), 1 - Y)
    assert series_expand(f, 2, 2) == [Fraction(1, 3)] * 3
