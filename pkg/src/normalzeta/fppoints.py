"""Point counts over F_p: Legendre symbols, quadrics, roots, and x^3 = 2."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmath import Poly

__all__ = [
    "ParseError",
    "BadPrimeError",
    "parse_poly",
    "parse_system",
    "primes_up_to",
    "is_prime",
    "legendre",
    "QuadraticForm",
    "diagonalize_quadratic",
    "quadric_point_count_closed",
    "quadric_count",
    "projective_count_bruteforce",
    "root_count_mod_p",
    "is_a2_27b2",
    "cubic_case_n",
    "case_label",
    "PrimeCaseValue",
]


class ParseError(ValueError):
    pass


class BadPrimeError(ValueError):
    """The closed form does not apply at this prime; use brute force."""


# parsing

_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"\s*\*?\s*(?:(\d+)|([A-Za-z]\w*))(?:\s*\^\s*(\d+))?")


def parse_poly(text: str, nvars: int | None = None) -> Poly:
    """Parse ``2 y1^2 - y2*y3`` (variables y1..yn) or ``x^3 - 2`` (univariate).

    Juxtaposition means multiplication.  Univariate input (variable ``x`` or
    ``t``) gives a Poly in one variable.
    """
    if not text.strip():
        raise ParseError("empty polynomial")
    pieces = _TERM_SPLIT.split(text.strip())
    signed = []
    sign = 1
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    for op, body in zip(pieces[::2], pieces[1::2]):
        if not body.strip():
            raise ParseError(f"dangling {op!r} in {text!r}")
        sign = 1 if op == "+" else -1
        signed.append((sign, body))
    if len(pieces) % 2:
        raise ParseError(f"dangling operator in {text!r}")

    parsed = []
    names = set()
    for sign, body in signed:
        coef, factors, pos = sign, [], 0
        body = body.strip()
        while pos < len(body):
            m = _FACTOR.match(body, pos)
            if not m or m.end() == pos:
                raise ParseError(f"cannot parse {body[pos:]!r}")
            num, name, power = m.groups()
            power = int(power) if power else 1
            if num is not None:
                coef *= int(num) ** power
            else:
                factors.append((name, power))
                names.add(name)
            pos = m.end()
        parsed.append((coef, factors))

    if names <= {"x", "t"}:
        if len(names) > 1:
            raise ParseError("use a single univariate variable")
        n = 1
        index = {name: 0 for name in names}
    else:
        index = {}
        for name in names:
            m = re.fullmatch(r"y(\d+)", name)
            if not m or int(m.group(1)) < 1:
                raise ParseError(f"unknown variable {name!r}; use y1, y2, ... or x")
            index[name] = int(m.group(1)) - 1
        n = max(index.values()) + 1
        if nvars is not None:
            if nvars < n:
                raise ParseError(f"polynomial uses y{n} but only {nvars} variables declared")
            n = nvars
    terms: dict = {}
    for coef, factors in parsed:
        e = [0] * n
        for name, power in factors:
            e[index[name]] += power
        terms[tuple(e)] = terms.get(tuple(e), 0) + coef
    return Poly(terms, n)


def parse_system(text: str, nvars: int | None = None) -> list:
    """Semicolon-separated polynomials sharing one variable count."""
    parts = [s for s in text.split(";") if s.strip()]
    polys = [parse_poly(s) for s in parts]
    if not polys:
        raise ParseError("empty system")
    n = max(p.nvars for p in polys)
    if nvars is not None:
        n = max(n, nvars)
    return [parse_poly(s, n) for s in parts]


# primes


def primes_up_to(n: int) -> list:
    """Primes p <= n by the sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, b in enumerate(sieve) if b]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    if p == 2 or p < 2:
        raise ValueError("legendre needs an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


# quadratic forms


@dataclass(frozen=True)
class QuadraticForm:
    """Integral quadratic form y^T G y with G symmetric (half-integral off the diagonal)."""

    gram: tuple

    @property
    def n(self) -> int:
        return len(self.gram)

    @classmethod
    def from_poly(cls, f: Poly) -> "QuadraticForm":
        n = f.nvars
        G = [[Fraction(0)] * n for _ in range(n)]
        for e, c in f.items():
            if sum(e) != 2 or any(k < 0 for k in e):
                raise ValueError("not a homogeneous quadratic form")
            idx = [i for i, k in enumerate(e) for _ in range(k)]
            i, j = idx
            if i == j:
                G[i][i] += Fraction(c)
            else:
                G[i][j] += Fraction(c) / 2
                G[j][i] += Fraction(c) / 2
        return cls(tuple(tuple(r) for r in G))

    @classmethod
    def diagonal(cls, coeffs: Sequence[int]) -> "QuadraticForm":
        n = len(coeffs)
        return cls(tuple(tuple(Fraction(coeffs[i]) if i == j else Fraction(0) for j in range(n)) for i in range(n)))

    def to_poly(self) -> Poly:
        n = self.n
        terms: dict = {}
        for i in range(n):
            for j in range(n):
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = terms.get(tuple(e), 0) + self.gram[i][j]
        return Poly(terms, n)

    def rank_over_Q(self) -> int:
        return _rank_mod([[x for x in r] for r in self.gram], None)

    def determinant(self) -> Fraction:
        A = [list(r) for r in self.gram]
        n = len(A)
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                det = -det
            det *= A[c][c]
            for r in range(c + 1, n):
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
        return det


def _rank_mod(rows, p):
    """Rank over Q (p None) or over F_p."""
    if p is None:
        A = [[Fraction(x) for x in r] for r in rows]
        inv = lambda x: 1 / x  # noqa: E731
        red = lambda x: x  # noqa: E731
    else:
        A = [[_mod_frac(x, p) for x in r] for r in rows]
        inv = lambda x: pow(x, -1, p)  # noqa: E731
        red = lambda x: x % p  # noqa: E731
    rank = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(A)) if A[r][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        iv = inv(A[rank][c])
        for r in range(len(A)):
            if r != rank and A[r][c] != 0:
                f = red(A[r][c] * iv)
                A[r] = [red(a - f * b) for a, b in zip(A[r], A[rank])]
        rank += 1
    return rank


def _mod_frac(x, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"coefficient {x} is not p-integral for p={p}")
    return x.numerator * pow(x.denominator, -1, p) % p


def diagonalize_quadratic(w: QuadraticForm, p: int):
    """Congruence-diagonalise w over F_p (p odd).

    Returns ``(diag, rank, T)`` with ``diag`` the nonzero diagonal entries
    (as residues mod p), ``rank = len(diag)`` and ``T`` an invertible n x n
    matrix over F_p with ``T G T^t = diag(diag + [0] * (n - rank))``.
    """
    if p == 2:
        raise ValueError("diagonalisation needs an odd prime")
    n = w.n
    A = [[_mod_frac(x, p) for x in r] for r in w.gram]
    T = [[int(i == j) for j in range(n)] for i in range(n)]

    def add_row_col(dst, src, f):
        # basis change e_dst += f * e_src
        A[dst] = [(a + f * b) % p for a, b in zip(A[dst], A[src])]
        for r in A:
            r[dst] = (r[dst] + f * r[src]) % p
        T[dst] = [(a + f * b) % p for a, b in zip(T[dst], T[src])]

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        for r in A:
            r[i], r[j] = r[j], r[i]
        T[i], T[j] = T[j], T[i]

    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if A[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # e_i + e_j has value 2 A_ij != 0
            add_row_col(i, j, 1)
            piv = i
        swap(k, piv)
        inv = pow(A[k][k], -1, p)
        for i in range(k + 1, n):
            if A[i][k]:
                add_row_col(i, k, (-A[i][k] * inv) % p)
        k += 1
    diag = [A[i][i] for i in range(n) if A[i][i]]
    # move zero diagonal entries to the end
    order = [i for i in range(n) if A[i][i]] + [i for i in range(n) if not A[i][i]]
    T = [T[i] for i in order]
    return diag, len(diag), T


def _affine_nondegenerate(diag: Sequence[int], p: int) -> int:
    m = len(diag)
    if m == 0:
        return 1
    if m % 2:
        return p ** (m - 1)
    D = 1
    for a in diag:
        D = D * a % p
    chi = legendre((-1) ** (m // 2) * D, p)
    return p ** (m - 1) + chi * (p - 1) * p ** (m // 2 - 1)


def quadric_point_count_closed(w: QuadraticForm, p: int) -> int:
    """|{w = 0} in P^(n-1)(F_p)| from the diagonal form, as (F_w - 1)/(p - 1).

    Raises BadPrimeError for p = 2 or when the rank drops mod p.
    """
    if p == 2:
        raise BadPrimeError("p = 2 is excluded; use brute force")
    try:
        diag, m, _ = diagonalize_quadratic(w, p)
    except ValueError as exc:
        raise BadPrimeError(str(exc)) from None
    if m < w.rank_over_Q():
        raise BadPrimeError(f"p = {p} divides the discriminant; use brute force")
    affine = p ** (w.n - m) * _affine_nondegenerate(diag, p)
    return (affine - 1) // (p - 1)


def quadric_count(w: QuadraticForm, p: int) -> int:
    """Closed form where valid, brute force at the excluded primes."""
    try:
        return quadric_point_count_closed(w, p)
    except BadPrimeError:
        return projective_count_bruteforce([_integral(w.to_poly())], p)


def _integral(f: Poly) -> Poly:
    den = 1
    for _, c in f.items():
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    return f * den


def _projective_points(n: int, p: int):
    for lead in range(n):
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def projective_count_bruteforce(polys: Sequence[Poly], p: int, n: int | None = None) -> int:
    """Number of points of P^(n-1)(F_p) where every polynomial vanishes."""
    if n is None:
        if not polys:
            raise ValueError("give n when the system is empty")
        n = polys[0].nvars
    compiled = []
    for f in polys:
        if f.nvars != n:
            raise ValueError("all polynomials must use the same variables")
        degrees = {sum(e) for e, _ in f.items()}
        if len(degrees) > 1:
            raise ValueError(f"polynomial {f} is not homogeneous")
        terms = []
        for e, c in f.items():
            c = Fraction(c)
            if c.denominator != 1:
                raise ValueError("coefficients must be integers")
            terms.append((int(c) % p, e))
        compiled.append(terms)
    count = 0
    for pt in _projective_points(n, p):
        ok = True
        for terms in compiled:
            s = 0
            for c, e in terms:
                t = c
                for v, k in zip(pt, e):
                    if k:
                        t = t * pow(v, k, p)
                s += t
            if s % p:
                ok = False
                break
        if ok:
            count += 1
    return count


# univariate roots


def _coeff_list(f: Poly) -> list:
    if f.nvars != 1:
        raise ValueError("expected a univariate polynomial")
    deg = f.max_exponents()[0]
    out = [0] * (deg + 1)
    for (k,), c in f.items():
        c = Fraction(c)
        if c.denominator != 1 or k < 0:
            raise ValueError("expected integer coefficients and nonnegative exponents")
        out[k] = int(c)
    return out


def _polymod_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, b, p):
    a = [x % p for x in a]
    _polymod_trim(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _polymod_trim(a)
    return a


def _polymulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _polygcd(a, b, p):
    a = _polymod_trim([x % p for x in a])
    b = _polymod_trim([x % p for x in b])
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def root_count_mod_p(f: Poly | Sequence[int], p: int, method: str = "auto") -> int:
    """Number of distinct roots of f in F_p.

    ``method`` is "scan" (evaluate at every residue), "gcd" (degree of
    gcd(f, t^p - t)) or "auto" (scan below 1000, gcd above).
    """
    coeffs = list(f) if not isinstance(f, Poly) else _coeff_list(f)
    red = _polymod_trim([c % p for c in coeffs])
    if not red:
        raise ValueError(f"polynomial vanishes identically mod {p}")
    if method == "auto":
        method = "scan" if p < 1000 else "gcd"
    if len(red) == 1:
        return 0
    if method == "scan":
        count = 0
        for t in range(p):
            s = 0
            for c in reversed(red):
                s = (s * t + c) % p
            if s == 0:
                count += 1
        return count
    if method != "gcd":
        raise ValueError(f"unknown method {method!r}")
    # t^p mod f by square-and-multiply
    result, base, e = [1], [0, 1], p
    base = _polymod(base, red, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, red, p)
        base = _polymulmod(base, base, red, p)
        e >>= 1
    tp_minus_t = list(result) + [0] * max(0, 2 - len(result))
    tp_minus_t[1] = (tp_minus_t[1] - 1) % p
    g = _polygcd(red, _polymod_trim(tp_minus_t), p) if any(tp_minus_t) else red
    return len(g) - 1


# x^3 - 2


def is_a2_27b2(p: int) -> bool:
    """True iff p = a^2 + 27 b^2 for integers a, b."""
    if p <= 3:
        raise ValueError("is_a2_27b2 needs p > 3")
    for b in range(1, math.isqrt(p // 27) + 1):
        r = p - 27 * b * b
        if math.isqrt(r) ** 2 == r:
            return True
    return False


def cubic_case_n(p: int) -> int:
    """Number of roots of x^3 - 2 mod p from the case law: 1, 3 or 0."""
    if p <= 3:
        raise ValueError("cubic_case_n needs p > 3")
    if p % 3 == 2:
        return 1
    return 3 if is_a2_27b2(p) else 0


def case_label(p: int) -> str:
    if p % 3 == 2:
        return "two_mod3"
    return "one_mod3_rep" if is_a2_27b2(p) else "one_mod3_norep"


@dataclass(frozen=True)
class PrimeCaseValue:
    p: int
    value: int
    case_label: str

    @classmethod
    def of(cls, p: int) -> "PrimeCaseValue":
        return cls(p, cubic_case_n(p), case_label(p))
