"""Empirical PORC probing of prime-indexed integer sequences.

A sequence is PORC with modulus N and degree D if on every residue class
mod N it agrees with one polynomial of degree <= D.  fit() interpolates
exactly through the first D+1 primes of each class and checks the rest;
a failure comes with D+2 points whose divided difference of order D+1 is
nonzero, which rules out every polynomial of degree <= D on that class.

Nothing here proves or disproves PORC-ness, which is a statement about all
primes; reports say which bounds were tried.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .fppoints import QuadraticForm, cubic_case_n, parse_poly, primes_up_to, quadric_count, root_count_mod_p

__all__ = [
    "InsufficientData",
    "PrimeSeries",
    "Witness",
    "PorcFit",
    "interpolate",
    "divided_difference",
    "fit",
    "scan",
    "ScanReport",
    "series_from",
    "cubic_series",
    "roots_series",
    "quadric_series",
    "format_poly",
]


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class PrimeSeries:
    entries: tuple  # ((p, v), ...)

    def __post_init__(self):
        ps = [p for p, _ in self.entries]
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise ValueError("primes must be strictly increasing")

    @classmethod
    def of(cls, pairs: Iterable) -> "PrimeSeries":
        return cls(tuple((int(p), int(v)) for p, v in pairs))

    def __len__(self):
        return len(self.entries)

    @property
    def bound(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def classes(self, N: int) -> dict:
        out: dict = {}
        for p, v in self.entries:
            out.setdefault(p % N, []).append((p, v))
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class Witness:
    residue: int
    points: tuple  # D+2 (p, v) pairs
    divided_difference: Fraction

    def text(self) -> str:
        ps = ",".join(str(p) for p, _ in self.points)
        vs = ",".join(str(v) for _, v in self.points)
        return f"r={self.residue} p=({ps}) v=({vs}) dd={self.divided_difference}"


@dataclass
class PorcFit:
    N: int
    D: int
    classes: dict = field(default_factory=dict)  # residue -> coefficient list (ascending)
    witness: Witness | None = None
    witnesses: list = field(default_factory=list)
    singletons: dict = field(default_factory=dict)  # residues sharing a factor with N

    @property
    def ok(self) -> bool:
        return self.witness is None

    def evaluate(self, p: int) -> Fraction:
        r = p % self.N
        return _horner(self.classes[r] if r in self.classes else self.singletons[r], p)


def _horner(coeffs, x) -> Fraction:
    s = Fraction(0)
    for c in reversed(coeffs):
        s = s * x + c
    return s


def interpolate(points) -> list:
    """Coefficients (ascending) of the polynomial through the points."""
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    n = len(pts)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(pts):
        # Lagrange basis polynomial for node i
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(pts):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, b in enumerate(basis):
            coeffs[k] += yi * b / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def divided_difference(points) -> Fraction:
    """f[x_0, ..., x_n]; zero iff the points lie on a polynomial of degree < n."""
    xs = [Fraction(x) for x, _ in points]
    table = [Fraction(y) for _, y in points]
    n = len(points)
    for level in range(1, n):
        table = [(table[i + 1] - table[i]) / (xs[i + level] - xs[i]) for i in range(n - level)]
    return table[0]


def fit(series: PrimeSeries, N: int, D: int) -> PorcFit:
    """Fit one polynomial of degree <= D per residue class mod N."""
    if N < 1 or D < 0:
        raise ValueError("need N >= 1 and D >= 0")
    out = PorcFit(N, D)
    for r, pts in series.classes(N).items():
        if math.gcd(r, N) > 1:
            # only the prime dividing N lands here
            out.singletons[r] = interpolate(pts[: D + 1])
            continue
        if len(pts) < D + 2:
            raise InsufficientData(f"class {r} mod {N} has {len(pts)} primes, need {D + 2} for D={D}")
        poly = interpolate(pts[: D + 1])
        bad = next(((p, v) for p, v in pts[D + 1:] if _horner(poly, p) != v), None)
        if bad is None:
            out.classes[r] = poly
            continue
        cert = tuple(pts[: D + 1]) + (bad,)
        out.witnesses.append(Witness(r, cert, divided_difference(cert)))
    if out.witnesses:
        out.witnesses.sort(key=lambda w: (w.points[-1][0], w.residue))
        out.witness = out.witnesses[0]
        out.classes = {}
    return out


def format_poly(coeffs) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[k])
        if c == 0:
            continue
        mon = "" if k == 0 else ("p" if k == 1 else f"p^{k}")
        mag = abs(c)
        s = str(mag) if (not mon or mag != 1) else ""
        if s and mon:
            s += "*"
        terms.append(("-" if c < 0 else "+") + s + mon)
    if not terms:
        return "0"
    text = "".join(terms)
    return text[1:] if text[0] == "+" else text


def _fit_text(f: PorcFit) -> str:
    parts = [f"{r}:{format_poly(c)}" for r, c in f.classes.items()]
    if f.singletons:
        parts.append("singleton classes " + ",".join(f"{r}:{format_poly(c)}" for r, c in f.singletons.items()))
    return "; ".join(parts)


@dataclass
class ScanReport:
    Nmax: int
    Dmax: int
    bound: int
    lines: list = field(default_factory=list)  # (N, D, verdict, text)
    first_fit: PorcFit | None = None
    witnesses: dict = field(default_factory=dict)  # N -> Witness at Dmax

    @property
    def found(self) -> bool:
        return self.first_fit is not None

    def to_tsv(self) -> str:
        out = [f"# porc-scan Nmax={self.Nmax} Dmax={self.Dmax} primes<={self.bound}", "# N\tD\tverdict\twitness-or-polys"]
        for N, D, verdict, text in self.lines:
            out.append(f"{N}\t{D}\t{verdict}\t{text}")
        if self.found:
            f = self.first_fit
            out.append(f"# fit found at N={f.N}, D={f.D} on primes <= {self.bound}")
        else:
            out.append(f"# no PORC fit with N <= {self.Nmax}, D <= {self.Dmax} on primes <= {self.bound}")
        return "\n".join(out) + "\n"


def scan(series: PrimeSeries, Nmax: int, Dmax: int) -> ScanReport:
    """Try N = 1..Nmax, D = 0..Dmax; stop at the first fit."""
    rep = ScanReport(Nmax, Dmax, series.bound)
    for N in range(1, Nmax + 1):
        last = None
        for D in range(Dmax + 1):
            try:
                f = fit(series, N, D)
            except InsufficientData as exc:
                raise InsufficientData(f"N={N}, D={D}: {exc}") from None
            if f.ok:
                rep.lines.append((N, D, "fit", _fit_text(f)))
                rep.first_fit = f
                return rep
            last = f
        rep.witnesses[N] = last.witness
        rep.lines.append((N, Dmax, "nofit", last.witness.text()))
    return rep


# series generators


def series_from(func: Callable[[int], int], pmax: int, pmin: int = 2) -> PrimeSeries:
    return PrimeSeries.of((p, func(p)) for p in primes_up_to(pmax) if p >= pmin)


def cubic_series(pmax: int) -> PrimeSeries:
    """|V(F_p)| = number of cube roots of 2, for 5 <= p <= pmax."""
    return series_from(cubic_case_n, pmax, 5)


def roots_series(poly_text: str, pmax: int, pmin: int = 2) -> PrimeSeries:
    f = parse_poly(poly_text, 1)
    return series_from(lambda p: root_count_mod_p(f, p), pmax, pmin)


def quadric_series(form_text: str, pmax: int, pmin: int = 2) -> PrimeSeries:
    w = QuadraticForm.from_poly(parse_poly(form_text))
    return series_from(lambda p: quadric_count(w, p), pmax, pmin)
