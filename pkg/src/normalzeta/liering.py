"""Class-2 nilpotent Lie rings given by antisymmetric matrices of linear forms.

A presentation has generators x_1..x_d, central generators y_1..y_d' and
brackets ``[x_i, x_j] = M(y)_ij`` where each entry is an integer linear form
in the y's.  Indices are 0-based in code and 1-based in the text format.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactmath import Poly

log = logging.getLogger(__name__)

__all__ = [
    "PresentationError",
    "Presentation",
    "load_presentation",
    "dump_presentation",
    "catalog_lookup",
    "catalog_names",
    "pfaffian",
    "determinant",
    "bracket",
    "base_change",
    "form_matrix",
]


class PresentationError(ValueError):
    """Malformed presentation text or inconsistent structure matrix."""


LinearForm = tuple  # d' integer coefficients of y_1..y_d'


@dataclass(frozen=True)
class Presentation:
    """Structure matrix ``M`` of a class-2 Lie ring.

    ``M[i][j]`` is a tuple of ``dprime`` integers: the coefficients of
    ``[x_{i+1}, x_{j+1}]`` on ``y_1..y_dprime``.
    """

    d: int
    dprime: int
    M: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.d < 1 or self.dprime < 1:
            raise PresentationError("d and dprime must be positive")
        if len(self.M) != self.d or any(len(row) != self.d for row in self.M):
            raise PresentationError("structure matrix must be d x d")
        for i in range(self.d):
            for j in range(self.d):
                if len(self.M[i][j]) != self.dprime:
                    raise PresentationError(f"entry ({i + 1},{j + 1}) is not a form in {self.dprime} variables")
                if any(a != -b for a, b in zip(self.M[i][j], self.M[j][i])):
                    raise PresentationError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")

    @classmethod
    def from_brackets(cls, d: int, dprime: int, brackets: dict, name: str = "") -> "Presentation":
        """Build from ``{(i, j): form}`` with 0-based i < j; the rest is zero."""
        zero = (0,) * dprime
        M = [[zero] * d for _ in range(d)]
        for (i, j), form in brackets.items():
            if not (0 <= i < d and 0 <= j < d):
                raise PresentationError(f"bracket index ({i + 1},{j + 1}) out of range")
            form = tuple(int(c) for c in form)
            if len(form) != dprime:
                raise PresentationError(f"bracket ({i + 1},{j + 1}) needs {dprime} coefficients")
            if i == j:
                if any(form):
                    raise PresentationError(f"diagonal bracket ({i + 1},{i + 1}) must vanish")
                continue
            M[i][j] = form
            M[j][i] = tuple(-c for c in form)
        return cls(d, dprime, tuple(tuple(r) for r in M), name)

    def brackets(self) -> dict:
        """Nonzero upper-triangular brackets, 0-based."""
        return {
            (i, j): self.M[i][j]
            for i in range(self.d)
            for j in range(i + 1, self.d)
            if any(self.M[i][j])
        }

    def span_rank(self) -> int:
        """Rank of the span of all entries of M inside the space of linear forms."""
        rows = [list(f) for f in self.brackets().values()]
        return _rank(rows)

    def radical_rank(self) -> int:
        """Dimension over Q of {a : [a, x] = 0 for all x}, i.e. the abelian part."""
        rows = []
        for i in range(self.d):
            rows.append([c for j in range(self.d) for c in self.M[i][j]])
        return self.d - _rank(rows)

    def with_name(self, name: str) -> "Presentation":
        return Presentation(self.d, self.dprime, self.M, name)


def _rank(rows: list) -> int:
    rows = [[Fraction(x) for x in r] for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


_LINE = re.compile(r"^bracket\s+(-?\d+)\s+(-?\d+)\s*:\s*(.*)$")


def load_presentation(text: str, name: str = "") -> Presentation:
    """Parse the line-oriented presentation format.

    ::

        d 5
        dprime 3
        bracket 1 4 : 0 0 1
    """
    d = dprime = None
    brackets: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("dprime"):
                _, val = line.split()
                dprime = int(val)
            elif line.startswith("d ") or line == "d":
                _, val = line.split()
                d = int(val)
            elif line.startswith("bracket"):
                if d is None or dprime is None:
                    raise PresentationError("bracket before d/dprime header")
                m = _LINE.match(line)
                if not m:
                    raise PresentationError("expected 'bracket i j : c1 ... c_dprime'")
                i, j = int(m.group(1)), int(m.group(2))
                coeffs = [int(c) for c in m.group(3).split()]
                if len(coeffs) != dprime:
                    raise PresentationError(f"expected {dprime} coefficients, got {len(coeffs)}")
                if not (1 <= i <= d and 1 <= j <= d):
                    raise PresentationError(f"index out of range 1..{d}")
                if i == j:
                    if any(coeffs):
                        raise PresentationError("diagonal bracket must vanish")
                    continue
                if i > j:
                    raise PresentationError("brackets must be listed with i < j")
                if (i - 1, j - 1) in brackets:
                    raise PresentationError(f"bracket {i} {j} given twice")
                brackets[(i - 1, j - 1)] = coeffs
            else:
                raise PresentationError(f"unrecognised line {line!r}")
        except PresentationError as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise PresentationError(f"line {lineno}: {exc}") from None
    if d is None or dprime is None:
        raise PresentationError("missing 'd' or 'dprime' line")
    P = Presentation.from_brackets(d, dprime, brackets, name)
    if P.span_rank() < dprime:
        log.warning(
            "brackets of %s span a rank-%d subspace of the %d central generators; closed forms will not apply",
            name or "presentation", P.span_rank(), dprime,
        )
    return P


def dump_presentation(P: Presentation) -> str:
    lines = [f"d {P.d}", f"dprime {P.dprime}"]
    for (i, j), form in sorted(P.brackets().items()):
        lines.append(f"bracket {i + 1} {j + 1} : " + " ".join(str(c) for c in form))
    return "\n".join(lines) + "\n"


# catalog


def _e(k: int, n: int, c: int = 1) -> tuple:
    v = [0] * n
    v[k] = c
    return tuple(v)


def _block(B: list, dprime: int, name: str) -> Presentation:
    """Presentation with matrix [[0, B], [-B^t, 0]]; B entries are forms."""
    rows, cols = len(B), len(B[0])
    brackets = {}
    for i in range(rows):
        for j in range(cols):
            if any(B[i][j]):
                brackets[(i, rows + j)] = B[i][j]
    return Presentation.from_brackets(rows + cols, dprime, brackets, name)


def _add(*forms):
    return tuple(sum(cs) for cs in zip(*forms))


def m0(r: int) -> Presentation:
    """Indecomposable normal form with B of shape (r+1) x r (d = 2r+1)."""
    if r < 1:
        raise ValueError("M0(r) needs r >= 1")
    y1, y2 = _e(0, 2), _e(1, 2)
    zero = (0, 0)
    B = [[zero] * r for _ in range(r + 1)]
    for k in range(r):
        B[k][k] = y2
        B[k + 1][k] = y1
    return _block(B, 2, f"M0({r})")


def mfe(a: Sequence[int]) -> Presentation:
    """Indecomposable normal form with square B of size r, det B = y1^r + a1 y1^(r-1) y2 + ... + a_r y2^r."""
    r = len(a)
    if r < 1:
        raise ValueError("Mfe needs at least one coefficient")
    y1, y2 = _e(0, 2), _e(1, 2)
    zero = (0, 0)
    B = [[zero] * r for _ in range(r)]
    B[0][0] = _add(y1, _e(1, 2, a[0]))
    for i in range(1, r):
        B[i][0] = _e(1, 2, (-1) ** i * a[i])
    for i in range(r):
        if i + 1 < r:
            B[i][i + 1] = _add(B[i][i + 1], y2)
        if i >= 1:
            B[i][i] = _add(B[i][i], y1)
    return _block(B, 2, "Mfe(" + ",".join(str(x) for x in a) + ")")


def heisenberg_product(k: int) -> Presentation:
    """Central product of k Heisenberg rings: [x_{2i-1}, x_{2i}] = y1."""
    if k < 1:
        raise ValueError("heisenberg_product needs k >= 1")
    return Presentation.from_brackets(2 * k, 1, {(2 * i, 2 * i + 1): (1,) for i in range(k)},
                                      f"heisenberg_product({k})")


def _gnp8() -> Presentation:
    y1, y2, y3 = _e(0, 3), _e(1, 3), _e(2, 3)
    br = {
        (0, 3): y3, (0, 4): y1,
        (1, 3): y2, (1, 4): y3,
        (2, 3): _e(0, 3, 2), (2, 4): y2,
    }
    return Presentation.from_brackets(5, 3, br, "gnp8")


def _g33_free() -> Presentation:
    return Presentation.from_brackets(3, 3, {(0, 1): _e(0, 3), (0, 2): _e(1, 3), (1, 2): _e(2, 3)}, "g33_free")


def _g52_dec(a1: int) -> Presentation:
    br = {(0, 1): (1, a1), (2, 4): (0, 1), (3, 4): (1, 0)}
    return Presentation.from_brackets(5, 2, br, f"g52_dec({a1})")


_CATALOG = {
    # name: (number of integer parameters or None for variadic, builder)
    "heisenberg": (0, lambda: heisenberg_product(1).with_name("heisenberg")),
    "heisenberg_product": (1, heisenberg_product),
    "M0": (1, m0),
    "Mfe": (None, lambda *a: mfe(a)),
    "g32": (0, lambda: m0(1).with_name("g32")),
    "g42": (2, lambda a1, a2: mfe((a1, a2)).with_name(f"g42({a1},{a2})")),
    "g52_indec": (0, lambda: m0(2).with_name("g52_indec")),
    "g52_dec": (1, _g52_dec),
    "g33_free": (0, _g33_free),
    "gnp8": (0, _gnp8),
    "gnp8prime": (0, lambda: mfe((0, 0, 2)).with_name("gnp8prime")),
}


def catalog_names() -> list:
    return list(_CATALOG)


def catalog_lookup(name: str, *params: int) -> Presentation:
    """Presentation of a named catalog group."""
    if name not in _CATALOG:
        raise KeyError(f"unknown catalog group {name!r}")
    nparams, build = _CATALOG[name]
    if nparams is not None and len(params) != nparams:
        raise ValueError(f"{name} takes {nparams} parameter(s), got {len(params)}")
    if nparams is None and not params:
        raise ValueError(f"{name} needs at least one parameter")
    return build(*params)


# polynomial invariants


def form_matrix(P: Presentation) -> list:
    """M(y) as a matrix of Polys in dprime variables."""
    n = P.dprime
    out = []
    for i in range(P.d):
        row = []
        for j in range(P.d):
            row.append(Poly({_e(k, n): c for k, c in enumerate(P.M[i][j]) if c}, n))
        out.append(row)
    return out


def pfaffian(P: Presentation) -> Poly:
    """Pfaffian of M(y), by expansion along the first row.

    Zero for odd d.  Normalised so that the standard symplectic block
    [[0, 1], [-1, 0]] has Pfaffian +1.
    """
    A = form_matrix(P)
    n = P.dprime
    if P.d % 2:
        return Poly({}, n)
    memo: dict = {}

    def pf(idx: tuple) -> Poly:
        if not idx:
            return Poly.const(1, n)
        if idx in memo:
            return memo[idx]
        i = idx[0]
        total = Poly({}, n)
        for pos in range(1, len(idx)):
            j = idx[pos]
            if A[i][j].is_zero():
                continue
            rest = idx[1:pos] + idx[pos + 1:]
            term = A[i][j] * pf(rest)
            total = total + term if pos % 2 == 1 else total - term
        memo[idx] = total
        return total

    return pf(tuple(range(P.d)))


def determinant(P: Presentation) -> Poly:
    """det M(y) by the Leibniz expansion (d <= 8 is fine)."""
    A = form_matrix(P)
    n = P.dprime
    total = Poly({}, n)
    for perm in itertools.permutations(range(P.d)):
        term = Poly.const(_perm_sign(perm), n)
        for i, j in enumerate(perm):
            if A[i][j].is_zero():
                break
            term = term * A[i][j]
        else:
            total = total + term
    return total


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def bracket(P: Presentation, u: Sequence[int], v: Sequence[int]) -> tuple:
    """[u, v] for vectors in the basis (x_1..x_d, y_1..y_d')."""
    n = P.d + P.dprime
    if len(u) != n or len(v) != n:
        raise ValueError(f"vectors must have length {n}")
    out = [0] * P.dprime
    for i in range(P.d):
        if not u[i] and not v[i]:
            continue
        for j in range(i + 1, P.d):
            c = u[i] * v[j] - u[j] * v[i]
            if c:
                for k, m in enumerate(P.M[i][j]):
                    out[k] += c * m
    return tuple(out)


def base_change(P: Presentation, A: Sequence[Sequence[int]], Q: Sequence[Sequence[int]]) -> Presentation:
    """Isomorphic presentation after x' = A x and y' coordinates = Q y.

    ``A`` is d x d and ``Q`` is d' x d', both unimodular.  The new bracket
    [x'_i, x'_j] = sum_kl A_ik A_jl M_kl, rewritten in the basis where a
    form with old coefficients c has new coefficients Q c.
    """
    d, n = P.d, P.dprime
    br = {}
    for i in range(d):
        for j in range(i + 1, d):
            c = [0] * n
            for k in range(d):
                if not A[i][k]:
                    continue
                for l in range(d):
                    if A[j][l]:
                        for t in range(n):
                            c[t] += A[i][k] * A[j][l] * P.M[k][l][t]
            new = tuple(sum(Q[r][t] * c[t] for t in range(n)) for r in range(n))
            if any(new):
                br[(i, j)] = new
    return Presentation.from_brackets(d, n, br, P.name + "'")
