from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from normalzeta.exactmath import Poly
from normalzeta.fppoints import (
    BadPrimeError,
    ParseError,
    QuadraticForm,
    _mod_frac,
    cubic_case_n,
    diagonalize_quadratic,
    is_a2_27b2,
    is_prime,
    legendre,
    parse_poly,
    parse_system,
    primes_up_to,
    projective_count_bruteforce,
    quadric_count,
    quadric_point_count_closed,
    root_count_mod_p,
)

V_SYSTEM = "2y1^2-y2*y3; y2^2-2y1*y3; y3^2-y1*y2"


def test_parse():
    f = parse_poly("2y1^2-y2*y3")
    assert f == Poly({(2, 0, 0): 2, (0, 1, 1): -1}, 3)
    assert parse_poly("x^3-2") == Poly({(3,): 1, (0,): -2}, 1)
    assert parse_poly("-y1^2 + 3") == Poly({(2,): -1, (0,): 3}, 1)
    assert len(parse_system(V_SYSTEM)) == 3
    with pytest.raises(ParseError):
        parse_poly("y1^^2")
    with pytest.raises(ParseError):
        parse_poly("y1 + z")


def test_primes():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert all(is_prime(p) for p in primes_up_to(2000))
    assert sum(is_prime(n) for n in range(2000)) == len(primes_up_to(1999))


def test_legendre_examples():
    assert legendre(1, 11) == 1
    assert legendre(-1, 7) == -1
    assert legendre(2, 7) == 1
    assert legendre(14, 7) == 0
    with pytest.raises(ValueError):
        legendre(1, 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.sampled_from(primes_up_to(100)[1:]))
def test_legendre_multiplicative(a, b, p):
    assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


@settings(max_examples=50, deadline=None)
@given(st.integers(-50, 50), st.sampled_from(primes_up_to(60)[1:]))
def test_legendre_against_squares(a, p):
    squares = {x * x % p for x in range(1, p)}
    want = 0 if a % p == 0 else (1 if a % p in squares else -1)
    assert legendre(a, p) == want


def _congruent(T, G, D, p):
    n = len(G)
    for i in range(n):
        for j in range(n):
            s = sum(T[i][k] * G[k][l] * T[j][l] for k in range(n) for l in range(n))
            if (_mod_frac(s, p) - (D[i] if i == j else 0)) % p:
                return False
    return True


def test_diagonalize_examples():
    diag, m, _ = diagonalize_quadratic(QuadraticForm.diagonal([1, 3]), 5)
    assert (diag, m) == ([1, 3], 2)
    diag, m, _ = diagonalize_quadratic(QuadraticForm.from_poly(parse_poly("y1*y2")), 5)
    assert m == 2 and legendre(diag[0] * diag[1], 5) == legendre(-1, 5)
    diag, m, _ = diagonalize_quadratic(QuadraticForm.from_poly(parse_poly("y1^2+0*y2^2+0*y3^2")), 7)
    assert m == 1 and legendre(diag[0], 7) == 1


quad_coeffs = st.lists(st.integers(-3, 3), min_size=6, max_size=6)


@settings(max_examples=60, deadline=None)
@given(quad_coeffs, st.sampled_from([3, 5, 7, 11]))
def test_diagonalize_is_a_congruence(c, p):
    # ternary form from 6 coefficients
    terms = {}
    mons = [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    for e, a in zip(mons, c):
        if a:
            terms[e] = a
    w = QuadraticForm.from_poly(Poly(terms, 3))
    diag, m, T = diagonalize_quadratic(w, p)
    D = diag + [0] * (3 - len(diag))
    assert _congruent(T, w.gram, D, p)
    assert m == sum(1 for x in diag if x % p)


def test_closed_count_examples():
    assert all(quadric_point_count_closed(QuadraticForm.diagonal([1, -1]), p) == 2 for p in (3, 5, 7, 11))
    assert quadric_point_count_closed(QuadraticForm.from_poly(parse_poly("y1^2+y2^2+y3^2")), 5) == 6
    w = QuadraticForm.diagonal([1, -1, 1, -1])
    assert quadric_point_count_closed(w, 3) == 16 == projective_count_bruteforce([w.to_poly()], 3)


def test_closed_count_bad_primes():
    w = QuadraticForm.diagonal([1, 3])
    with pytest.raises(BadPrimeError):
        quadric_point_count_closed(w, 2)
    with pytest.raises(BadPrimeError):
        quadric_point_count_closed(w, 3)
    assert quadric_count(w, 3) == projective_count_bruteforce([w.to_poly()], 3)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_closed_equals_bruteforce_diagonal(n, p):
    for entries in product([1, 2, 3], repeat=n):
        if any(a % p == 0 for a in entries):
            continue
        w = QuadraticForm.diagonal(list(entries))
        assert quadric_point_count_closed(w, p) == projective_count_bruteforce([w.to_poly()], p), entries


@settings(max_examples=30, deadline=None)
@given(quad_coeffs, st.sampled_from([5, 7, 11, 13]))
def test_closed_equals_bruteforce_general(c, p):
    mons = [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    w = QuadraticForm.from_poly(Poly({e: a for e, a in zip(mons, c) if a}, 3))
    if w.rank_over_Q() == 0:
        return
    try:
        n = quadric_point_count_closed(w, p)
    except BadPrimeError:
        return
    assert n == projective_count_bruteforce([w.to_poly()], p)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_smooth_quadric_counts(p):
    # odd n: 1 + p + ... + p^(n-2); even n: that sum plus or minus p^(n/2-1)
    for n in (2, 3, 4):
        w = QuadraticForm.diagonal([1] * (n - 1) + [2])
        base = sum(p ** i for i in range(n - 1))
        got = projective_count_bruteforce([w.to_poly()], p)
        if n % 2:
            assert got == base
        else:
            assert got - base in (p ** (n // 2 - 1), -p ** (n // 2 - 1))


def test_bruteforce_examples():
    assert projective_count_bruteforce([], 5, n=3) == 31
    system = parse_system(V_SYSTEM)
    assert [projective_count_bruteforce(system, p) for p in (5, 7, 31, 43)] == [1, 0, 3, 3]


def test_root_counts():
    assert root_count_mod_p([1, 0, 1], 13) == 2
    assert root_count_mod_p([-2, 0, 0, 1], 7) == 0
    assert root_count_mod_p([-2, 0, 0, 1], 5) == 1
    assert root_count_mod_p(parse_poly("x^3-2"), 43) == 3


@pytest.mark.parametrize("p", primes_up_to(400)[2:])
def test_root_count_methods_agree(p):
    for f in ([-2, 0, 0, 1], [1, 0, 1], [2, 0, 0, 1], [1, 1, 1, 0, 1]):
        assert root_count_mod_p(f, p, "scan") == root_count_mod_p(f, p, "gcd")


def test_a2_27b2():
    assert is_a2_27b2(31) and is_a2_27b2(43) and not is_a2_27b2(7)


def test_cubic_case():
    assert cubic_case_n(5) == 1 and cubic_case_n(31) == 3 and cubic_case_n(13) == 0
    assert cubic_case_n(7) == 0
    with pytest.raises(ValueError):
        cubic_case_n(3)


def test_cubic_case_law_short():
    for p in primes_up_to(2000)[2:]:
        assert cubic_case_n(p) == root_count_mod_p([-2, 0, 0, 1], p)
