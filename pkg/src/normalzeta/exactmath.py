"""Exact polynomials and rational functions over Q in a few formal variables.

Polynomials are sparse maps from exponent tuples to rational coefficients.
Exponents may be negative (Laurent polynomials); this is what lets table
substitutions such as ``Y -> p^-1 T^-2`` be carried out directly.  Rational
functions keep their denominator as a multiset of normalised factors, which
keeps sums of generating functions small without needing polynomial gcds.

Variable 0 is ``X`` (standing for p), variable 1 is ``Y`` (standing for
T = p^-s) and variable 2, when present, is ``Z``.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Poly",
    "RatFunc",
    "SeriesError",
    "BiPoly",
    "BiRatFunc",
    "TriRatFunc",
    "monomial",
    "var",
    "euler_factor",
    "zeta_Zpd",
    "gauss_binomial",
    "series_expand",
    "truncated_series",
    "ratfunc_equal",
]


class SeriesError(ValueError):
    """Raised when a rational function has no power-series expansion."""


def _norm(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class Poly:
    """Immutable sparse (Laurent) polynomial with rational coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None, nvars: int = 2):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                if c:
                    clean[tuple(e)] = _norm(c)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c, nvars: int = 2) -> "Poly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # container protocol
    def items(self):
        return self._terms.items()

    def terms(self) -> dict:
        return dict(self._terms)

    def coeff(self, exps: tuple):
        return self._terms.get(tuple(exps), 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_const(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def const_value(self):
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * self.nvars, 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # comparison
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.nvars)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw({}, self.nvars)
            return Poly._raw({e: _norm(c * other) for e, c in self._terms.items()}, self.nvars)
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        return RatFunc(self) / other

    # structure
    def min_exponents(self) -> tuple:
        if not self._terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self._terms) for i in range(self.nvars))

    def max_exponents(self) -> tuple:
        if not self._terms:
            return (0,) * self.nvars
        return tuple(max(e[i] for e in self._terms) for i in range(self.nvars))

    def degree(self, i: int) -> int:
        return self.max_exponents()[i]

    def shift(self, exps: Sequence[int]) -> "Poly":
        """Multiply by the Laurent monomial with exponents ``exps``."""
        return Poly._raw(
            {tuple(a + b for a, b in zip(e, exps)): c for e, c in self._terms.items()}, self.nvars
        )

    def is_laurent(self) -> bool:
        return any(x < 0 for x in self.min_exponents())

    def evaluate(self, values: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self._terms.items():
            t = Fraction(c)
            for v, k in zip(values, e):
                if k:
                    t *= Fraction(v) ** k
            total += t
        return _norm(total)

    def substitute(self, images: Sequence["Poly"], nvars: int | None = None) -> "Poly":
        """Substitute Laurent polynomials for each variable.

        Negative exponents are only allowed where the image is a monomial.
        """
        nvars = images[0].nvars if images else self.nvars
        result = Poly._raw({}, nvars)
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                img = images[i]
                if k >= 0:
                    cache[key] = img ** k
                else:
                    if not img.is_monomial():
                        raise ValueError("negative power of a non-monomial substitution")
                    (e, c), = img.items()
                    cache[key] = Poly({tuple(x * k for x in e): Fraction(c) ** k}, nvars)
            return cache[key]

        for e, c in self._terms.items():
            t = Poly.const(c, nvars)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            result = result + t
        return result

    def leading(self):
        e = max(self._terms)
        return e, self._terms[e]

    def divide_exact(self, other: "Poly") -> "Poly | None":
        """Quotient ``self / other`` if the division is exact, else None.

        Lexicographic long division; both operands must be true polynomials.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_laurent() or other.is_laurent():
            raise ValueError("exact division needs non-Laurent operands")
        le, lc = other.leading()
        rem = self
        quot: dict = {}
        while rem:
            e, c = rem.leading()
            if any(a < b for a, b in zip(e, le)):
                return None
            qe = tuple(a - b for a, b in zip(e, le))
            qc = Fraction(c) / lc
            quot[qe] = qc
            rem = rem - Poly({qe: qc}, self.nvars) * other
        return Poly(quot, self.nvars)

    def __repr__(self):
        if not self._terms:
            return "0"
        names = "XYZ" if self.nvars <= 3 else None
        parts = []
        for e in sorted(self._terms):
            c = self._terms[e]
            mon = []
            for i, k in enumerate(e):
                if k:
                    name = names[i] if names else f"y{i + 1}"
                    mon.append(name if k == 1 else f"{name}^{k}")
            body = "*".join(mon)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


BiPoly = Poly


def monomial(exps: Sequence[int], coeff=1, nvars: int | None = None) -> Poly:
    exps = tuple(exps)
    return Poly({exps: coeff}, nvars or len(exps))


def var(i: int, nvars: int = 2) -> Poly:
    e = [0] * nvars
    e[i] = 1
    return Poly({tuple(e): 1}, nvars)


def _normalise_factor(f: Poly):
    """Split ``f`` as scalar * monomial * factor with a canonical factor.

    The factor has minimum exponent 0 in every variable and coefficient 1 at
    its lexicographically smallest exponent.
    """
    mins = f.min_exponents()
    g = f.shift([-m for m in mins])
    lo = min(g._terms)
    c = g._terms[lo]
    g = g * (Fraction(1) / c)
    return c, mins, g


class RatFunc:
    """Rational function ``num / prod(factor ** mult)`` over Q.

    Equality is mathematical: two values compare equal whenever
    ``num1 * den2 == num2 * den1``.
    """

    __slots__ = ("nvars", "_num", "_factors")

    def __init__(self, num, den=None, nvars: int | None = None):
        if isinstance(num, Poly):
            nvars = num.nvars
        elif nvars is None:
            nvars = den.nvars if isinstance(den, Poly) else 2
        if not isinstance(num, Poly):
            num = Poly.const(num, nvars)
        self.nvars = nvars
        factors: Counter = Counter()
        if den is None:
            pass
        elif isinstance(den, Poly):
            num, factors = _absorb(num, factors, den, 1)
        elif isinstance(den, Mapping):
            for f, m in den.items():
                num, factors = _absorb(num, factors, f, m)
        else:
            num, factors = _absorb(num, factors, Poly.const(den, nvars), 1)
        self._num = num
        self._factors = factors

    @classmethod
    def _raw(cls, num: Poly, factors: Counter) -> "RatFunc":
        r = cls.__new__(cls)
        r.nvars = num.nvars
        r._num = num
        r._factors = +factors
        return r

    # views
    @property
    def numerator(self) -> Poly:
        """Numerator as stored (possibly Laurent)."""
        return self._num

    @property
    def factors(self) -> dict:
        return dict(self._factors)

    def den_poly(self) -> Poly:
        d = Poly.const(1, self.nvars)
        for f, m in self._factors.items():
            d = d * f ** m
        return d

    def cleared(self) -> tuple[Poly, Poly]:
        """(num, den) as genuine polynomials, clearing any Laurent monomial."""
        mins = self._num.min_exponents()
        shift = [-m if m < 0 else 0 for m in mins]
        num = self._num.shift(shift)
        den = self.den_poly().shift(shift)
        return num, den

    @property
    def num(self) -> Poly:
        return self.cleared()[0]

    @property
    def den(self) -> Poly:
        return self.cleared()[1]

    def is_zero(self) -> bool:
        return self._num.is_zero()

    # arithmetic
    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc(Poly.const(other, self.nvars))
        raise TypeError(f"cannot combine RatFunc with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        if other._num.is_zero():
            return self
        if self._num.is_zero():
            return other
        lcm = self._factors | other._factors
        a = self._num * _prod(lcm - self._factors, self.nvars)
        b = other._num * _prod(lcm - other._factors, self.nvars)
        return RatFunc._raw(a + b, lcm)._cancel()

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self._num, self._factors)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc._raw(self._num * other._num, self._factors + other._factors)._cancel()

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other._num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        num, factors = _absorb(self._num, self._factors + Counter(), other._num, 1)
        num = num * _prod(other._factors, self.nvars)
        return RatFunc._raw(num, factors)._cancel()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n >= 0:
            return RatFunc._raw(self._num ** n, Counter({f: m * n for f, m in self._factors.items()}))
        return RatFunc(Poly.const(1, self.nvars)) / self ** (-n)

    def _cancel(self) -> "RatFunc":
        """Cancel denominator factors that divide the numerator exactly."""
        if not self._factors or self._num.is_zero():
            if self._num.is_zero():
                return RatFunc._raw(self._num, Counter())
            return self
        mins = self._num.min_exponents()
        num = self._num.shift([-m for m in mins])
        factors = Counter(self._factors)
        changed = False
        for f in list(factors):
            if len(f) > len(num):
                continue
            while factors[f]:
                q = num.divide_exact(f) if len(f) <= len(num) else None
                if q is None:
                    break
                num = q
                factors[f] -= 1
                changed = True
        if not changed:
            return self
        return RatFunc._raw(num.shift(mins), factors)

    # comparison
    def __eq__(self, other):
        if isinstance(other, (RatFunc, Poly, int, Fraction)):
            other = self._coerce(other)
            common = self._factors & other._factors
            lhs = self._num * _prod(other._factors - common, self.nvars)
            rhs = other._num * _prod(self._factors - common, self.nvars)
            return lhs == rhs
        return NotImplemented

    __hash__ = None

    # evaluation and substitution
    def evaluate(self, values: Sequence) -> Fraction:
        d = Fraction(1)
        for f, m in self._factors.items():
            d *= Fraction(f.evaluate(values)) ** m
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return _norm(Fraction(self._num.evaluate(values)) / d)

    def substitute(self, images: Sequence[Poly]) -> "RatFunc":
        """Substitute Laurent monomials (or polynomials) for each variable."""
        nvars = images[0].nvars
        result = RatFunc(self._num.substitute(images, nvars))
        for f, m in self._factors.items():
            g = f.substitute(images, nvars)
            if g.is_zero():
                raise ZeroDivisionError(f"factor {f} vanishes under substitution")
            num, factors = _absorb(result._num, Counter(result._factors), g, m)
            result = RatFunc._raw(num, factors)
        return result._cancel()

    def __repr__(self):
        if not self._factors:
            return f"({self._num})"
        den = " * ".join(
            f"({f})" if m == 1 else f"({f})^{m}" for f, m in sorted(self._factors.items(), key=repr)
        )
        return f"({self._num}) / ({den})"


BiRatFunc = RatFunc
TriRatFunc = RatFunc


def _prod(factors: Mapping, nvars: int) -> Poly:
    out = Poly.const(1, nvars)
    for f, m in factors.items():
        if m:
            out = out * f ** m
    return out


def _absorb(num: Poly, factors: Counter, den: Poly, mult: int):
    """Divide ``num / factors`` by ``den ** mult`` keeping canonical factors."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    scale, mins, g = _normalise_factor(den)
    num = num.shift([-m * mult for m in mins]) * (Fraction(1) / Fraction(scale) ** mult)
    if not g.is_const():
        factors = Counter(factors)
        factors[g] += mult
    return num, factors


def ratfunc_equal(f: RatFunc, g: RatFunc) -> bool:
    """Cross-multiplication equality of two rational functions."""
    return RatFunc(f) == g if isinstance(f, Poly) else f == g


# building blocks


def euler_factor(a: int, b: int) -> RatFunc:
    """The local factor 1/(1 - X^b Y^a), i.e. zeta_p(a s - b)."""
    if a < 1:
        raise ValueError("euler_factor needs a >= 1")
    if b < 0:
        raise ValueError("euler_factor needs b >= 0")
    return RatFunc(Poly.const(1), Poly({(0, 0): 1, (b, a): -1}))


def zeta_Zpd(d: int) -> RatFunc:
    """Local zeta function of Z_p^d: prod_{i<d} 1/(1 - X^i Y)."""
    out = RatFunc(Poly.const(1))
    for i in range(d):
        out = out * euler_factor(1, i)
    return out


def gauss_binomial(n: int, k: int) -> Poly:
    """Gaussian binomial coefficient [n choose k] as a polynomial in X."""
    if n < 0 or not 0 <= k <= n:
        raise ValueError(f"gauss_binomial needs 0 <= k <= n, got n={n}, k={k}")
    # q-Pascal: [n,k] = [n-1,k-1] + X^k [n-1,k]
    row = [Poly.const(1)]
    for m in range(1, n + 1):
        new = []
        for j in range(m + 1):
            left = row[j - 1] if j >= 1 else Poly()
            right = row[j].shift((j, 0)) if j < m else Poly()
            new.append(left + right)
        row = new
    return row[k]


# series


def truncated_series(f: RatFunc | Poly, weights: Sequence[int], bound: int) -> Poly:
    """Terms of the expansion of ``f`` with weighted degree <= bound.

    Every denominator factor must have a single monomial ``c x^e`` as its
    weight-0 part and no terms of negative weight; it is then inverted as
    ``x^-e / c`` times a geometric series in terms of positive weight.
    """
    if isinstance(f, Poly):
        f = RatFunc(f)
    nvars = f.nvars

    def w(e):
        return sum(a * b for a, b in zip(weights, e))

    def trunc(p: Poly, b: int) -> Poly:
        return Poly._raw({e: c for e, c in p.items() if w(e) <= b}, nvars)

    num = f.numerator
    units = []
    for g, m in f.factors.items():
        zero_part = [(e, c) for e, c in g.items() if w(e) == 0]
        if any(w(e) < 0 for e, _ in g.items()):
            raise SeriesError(f"factor {g} has terms of negative weight")
        if len(zero_part) != 1:
            raise SeriesError(f"factor {g} has no invertible constant term")
        (e0, c), = zero_part
        num = num.shift([-a * m for a in e0])
        units.append((g.shift([-a for a in e0]), Fraction(c), m))
    lo = min((w(e) for e, _ in num.items()), default=0)
    inner = bound - min(lo, 0)
    inv = Poly.const(1, nvars)
    for g, c, m in units:
        h = (Poly.const(c, nvars) - g) * (1 / c)  # g = c (1 - h)
        geo = Poly.const(1, nvars)
        power = Poly.const(1, nvars)
        minw = min((w(e) for e, _ in h.items()), default=inner + 1)
        for _ in range(inner // max(minw, 1) + 1 if h else 0):
            power = trunc(power * h, inner)
            if power.is_zero():
                break
            geo = geo + power
        geo = geo * (1 / c)
        for _ in range(m):
            inv = trunc(inv * geo, inner)
    return trunc(num * inv, bound)


def series_expand(f: RatFunc, p: int, K: int) -> list:
    """Coefficients c_0..c_K of f(p, Y) as a power series in Y."""
    if K < 0:
        raise ValueError("K must be >= 0")
    if isinstance(f, Poly):
        f = RatFunc(f)
    if f.nvars != 2:
        raise ValueError("series_expand works on two-variable rational functions")
    g = f.substitute([Poly.const(p), var(1)])
    for fac in g.factors:
        if fac.coeff((0, 0)) == 0:
            raise SeriesError(f"denominator factor {fac} has vanishing constant term at X={p}")
    lo = g.numerator.min_exponents()[1]
    s = truncated_series(g, (0, 1), K)
    if lo < 0:
        bad = [(k, s.coeff((0, k))) for k in range(lo, 0) if s.coeff((0, k))]
        if bad:
            raise SeriesError(f"expansion has a pole at Y=0 (coefficient of Y^{bad[0][0]} is {bad[0][1]})")
    return [s.coeff((0, k)) for k in range(K + 1)]
