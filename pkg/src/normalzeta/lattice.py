"""Ground-truth ideal counts by exhaustive lattice enumeration.

Two independent routes to the coefficients a_{p^k} of the local ideal zeta
function of a class-2 Lie ring L = Z^d (+) Z^d':

* ``ideal_coefficients_full`` walks every Hermite-normal-form sublattice of
  Z^(d+d') of index p^k and tests closure under brackets directly.
* ``ideal_coefficients_reduced`` sums over lattices of the derived ring only,
  weighting each by |L':L'_0|^d and by the index of its centraliser
  preimage, computed with Smith normal form.

Sublattices are row-style upper-triangular HNF matrices: row i is
(0, .., 0, h_ii, h_i,i+1, ..) with 0 <= h_ij < h_jj for j > i.
"""

from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from .exactmath import series_expand, zeta_Zpd
from .liering import Presentation, bracket

log = logging.getLogger(__name__)

__all__ = [
    "BudgetExceeded",
    "HNFLattice",
    "CoefficientTable",
    "hnf",
    "smith_diagonal",
    "compositions",
    "count_sublattices",
    "enumerate_sublattices",
    "index_p_sublattices",
    "is_maximal",
    "contains",
    "centralizer_index",
    "lambda_prime_weights",
    "ideal_coefficients_reduced",
    "ideal_coefficients_full",
    "ideal_coefficients_bruteforce",
    "direct_sum_with_abelian",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """The full oracle would enumerate more lattices than allowed."""


@dataclass(frozen=True)
class HNFLattice:
    """Full-rank sublattice of Z^n in canonical Hermite normal form."""

    basis: tuple  # tuple of n row tuples

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def diagonal(self) -> tuple:
        return tuple(self.basis[i][i] for i in range(self.n))

    def index(self) -> int:
        out = 1
        for h in self.diagonal:
            out *= h
        return out

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], n: int | None = None) -> "HNFLattice":
        return cls(hnf(rows, n))

    @classmethod
    def full(cls, n: int) -> "HNFLattice":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


@dataclass
class CoefficientTable:
    p: int
    K: int
    a: list
    group: str = ""
    method: str = ""

    def to_tsv(self) -> str:
        lines = [f"# group={self.group} p={self.p} method={self.method}"]
        lines += [f"{k}\t{v}" for k, v in enumerate(self.a)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "CoefficientTable":
        meta = {}
        a = []
        for line in text.splitlines():
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    meta[key] = val
            elif line.strip():
                k, v = line.split("\t")
                if int(k) != len(a):
                    raise ValueError(f"coefficient rows out of order at k={k}")
                a.append(int(v))
        return cls(int(meta.get("p", 0)), len(a) - 1, a, meta.get("group", ""), meta.get("method", ""))


# integer normal forms


def hnf(rows: Sequence[Sequence[int]], n: int | None = None) -> tuple:
    """Row-style upper-triangular HNF of the lattice spanned by ``rows``.

    The lattice must have full rank n.
    """
    A = [list(r) for r in rows if any(r)]
    if n is None:
        n = len(A[0])
    out = []
    for col in range(n):
        # gcd of column col among remaining rows by Euclid on row pairs
        piv = None
        active = [r for r in A if r[col] != 0]
        rest = [r for r in A if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            base = active[0]
            nxt = [base]
            for r in active[1:]:
                q = r[col] // base[col]
                r = [a - q * b for a, b in zip(r, base)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        if not active:
            raise ValueError("rows do not span a full-rank lattice")
        piv = active[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        A = rest
    # reduce entries above the diagonal
    for j in range(n):
        hj = out[j][j]
        for i in range(j):
            q = out[i][j] // hj
            if q:
                out[i] = [a - q * b for a, b in zip(out[i], out[j])]
    return tuple(tuple(r) for r in out)


def smith_diagonal(rows: Sequence[Sequence[int]]) -> list:
    """Nonzero elementary divisors of an integer matrix (Smith normal form)."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    diag = []
    t = 0
    while t < min(m, n):
        # find a nonzero pivot of minimal absolute value in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    for r in A:
                        r[j] -= q * r[t]
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: the pivot must divide every trailing entry
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column t into the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            A[t], A[i] = A[i], A[t]
            for r in A:
                r[t], r[j] = r[j], r[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _vp(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# enumeration


def compositions(k: int, n: int) -> Iterator[tuple]:
    """Weak compositions of k into n parts, lexicographically."""
    if n == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in compositions(k - first, n - 1):
            yield (first,) + rest


def count_sublattices(n: int, p: int, k: int) -> int:
    total = 0
    for exps in compositions(k, n):
        c = 1
        for j, e in enumerate(exps):
            c *= p ** (e * j)
        total += c
    return total


def enumerate_sublattices(n: int, p: int, k: int) -> Iterator[HNFLattice]:
    """Every sublattice of Z^n of index p^k, once each, in a fixed order."""
    for exps in compositions(k, n):
        yield from _enumerate_type(n, p, exps)


def _enumerate_type(n: int, p: int, exps: tuple) -> Iterator[HNFLattice]:
    diag = [p ** e for e in exps]
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    ranges = [range(diag[j]) for (_, j) in slots]
    for values in itertools.product(*ranges):
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = diag[i]
        for (i, j), v in zip(slots, values):
            rows[i][j] = v
        yield HNFLattice(tuple(tuple(r) for r in rows))


def index_p_sublattices(L: HNFLattice, p: int) -> list:
    """All sublattices of L of index p (as HNF)."""
    out = []
    for H in enumerate_sublattices(L.n, p, 1):
        rows = [[sum(h[k] * L.basis[k][j] for k in range(L.n)) for j in range(L.n)] for h in H.basis]
        out.append(HNFLattice(hnf(rows, L.n)))
    return out


def is_maximal(L: HNFLattice, p: int) -> bool:
    """True iff p^-1 L is not contained in Z^n."""
    return any(x % p for row in L.basis for x in row)


def contains(L: HNFLattice, v: Sequence[int]) -> bool:
    """Membership of an integer vector, by back-substitution on the HNF rows."""
    v = list(v)
    for i, row in enumerate(L.basis):
        if v[i]:
            q, r = divmod(v[i], row[i])
            if r:
                return False
            for j in range(i, len(v)):
                v[j] -= q * row[j]
    return True


def centralizer_index(P: Presentation, Lp: HNFLattice, p: int) -> int:
    """log_p |L : X(Lp)| where X(Lp)/Lp is the centre of L/Lp.

    Uses the Smith normal form of the bracket rows of the generators stacked
    on d copies of the basis of ``Lp``.
    """
    d, n = P.d, P.dprime
    if Lp.n != n:
        raise ValueError(f"lattice has dimension {Lp.n}, expected {n}")
    rows = []
    for i in range(d):
        rows.append([c for j in range(d) for c in P.M[i][j]])
    for blk in range(d):
        for b in Lp.basis:
            r = [0] * (d * n)
            r[blk * n:(blk + 1) * n] = b
            rows.append(r)
    divisors = smith_diagonal(rows)
    m = _vp(Lp.index(), p) if Lp.index() > 1 else 0
    vdet = sum(_vp(x, p) for x in divisors if x > 1)
    return m * d - vdet


def lambda_prime_weights(P: Presentation, p: int, K: int, maximal_only: bool = False) -> dict:
    """Map (m, c) -> number of lattices L' <= Z^d' of index p^m with centraliser index c.

    Only pairs with m + c <= K are listed.  The search descends through
    index-p sublattices: c can only grow when passing to a sublattice, so a
    lattice with (m - 1) + c >= K has no descendant that matters.
    """
    n = P.dprime
    counts: dict = {}
    level = {HNFLattice.full(n)}
    for m in range(K + 1):
        nxt = set()
        for L in level:
            c = centralizer_index(P, L, p)
            if m + c <= K and (not maximal_only or m == 0 or is_maximal(L, p)):
                counts[(m, c)] = counts.get((m, c), 0) + 1
            if m + c < K:
                nxt.update(index_p_sublattices(L, p))
        level = nxt
        if not level:
            break
    return counts


def ideal_coefficients_reduced(P: Presentation, p: int, K: int) -> CoefficientTable:
    """Coefficients via the reduction to lattices in the derived ring."""
    inner = [0] * (K + 1)
    for (m, c), cnt in lambda_prime_weights(P, p, K).items():
        inner[m + c] += cnt * p ** (m * P.d)
    abelian = series_expand(zeta_Zpd(P.d), p, K)
    a = [sum(abelian[i] * inner[k - i] for i in range(k + 1)) for k in range(K + 1)]
    return CoefficientTable(p, K, [int(x) for x in a], P.name, "reduced")


# full oracle


def _row_choices_ok(P: Presentation, Lp: HNFLattice, xpart: Sequence[int]) -> bool:
    """Every bracket [row, x_j] lies in Lp (the central block of the lattice)."""
    d = P.d
    for j in range(d):
        z = [0] * P.dprime
        for i, a in enumerate(xpart):
            if a:
                for t, c in enumerate(P.M[i][j]):
                    z[t] += a * c
        if any(z) and not contains(Lp, z):
            return False
    return True


def _count_type(args) -> int:
    """Ideals of one diagonal type; rows above the centre are checked one by one."""
    P, p, exps = args
    d, n = P.d, P.d + P.dprime
    diag = [p ** e for e in exps]
    total = 0
    for Lp in _enumerate_type(P.dprime, p, exps[d:]):
        prod = 1
        for i in range(d):
            free_x = [range(diag[j]) for j in range(i + 1, d)]
            good = 0
            for tail in itertools.product(*free_x):
                xpart = [0] * i + [diag[i]] + list(tail)
                if _row_choices_ok(P, Lp, xpart):
                    good += 1
            if not good:
                prod = 0
                break
            central = 1
            for j in range(d, n):
                central *= diag[j]
            prod *= good * central
        total += prod
    return total


def _default_threads() -> int:
    env = os.environ.get("NORMALZETA_THREADS")
    return int(env) if env else 1


def ideal_coefficients_full(P: Presentation, p: int, K: int, budget: int = DEFAULT_BUDGET,
                            threads: int | None = None) -> CoefficientTable:
    """Count ideals of index p^k directly among all HNF sublattices of Z^(d+d').

    An HNF lattice is an ideal iff each basis row b has [b, x_i] in the
    lattice for every generator x_i.  For the rows of the central block this
    is automatic; for the others the test only involves that row and the
    central block, so rows are enumerated and tested independently and the
    counts multiplied.  Work is split by diagonal type.
    """
    n = P.d + P.dprime
    predicted = sum(count_sublattices(n, p, k) for k in range(K + 1))
    if predicted > budget:
        raise BudgetExceeded(
            f"{predicted} sublattices of Z^{n} with index <= {p}^{K} exceeds the budget of {budget}"
        )
    threads = threads or _default_threads()
    a = []
    for k in range(K + 1):
        jobs = [(P, p, exps) for exps in compositions(k, n)]
        if threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                a.append(sum(pool.map(_count_type, jobs, chunksize=max(1, len(jobs) // (4 * threads)))))
        else:
            a.append(sum(map(_count_type, jobs)))
        log.debug("full oracle %s p=%d k=%d -> %d", P.name, p, k, a[-1])
    return CoefficientTable(p, K, a, P.name, "full")


def is_ideal(P: Presentation, L: HNFLattice) -> bool:
    """Direct ideal test: [b, x_i] in L for every basis row b and generator x_i."""
    n = P.d + P.dprime
    for b in L.basis:
        for i in range(P.d):
            e = [0] * n
            e[i] = 1
            br = bracket(P, b, e)
            v = [0] * P.d + list(br)
            if any(br) and not contains(L, v):
                return False
    return True


def ideal_coefficients_bruteforce(P: Presentation, p: int, K: int, budget: int = 10**6) -> CoefficientTable:
    """Literal stream over every HNF lattice; only for tiny cases."""
    n = P.d + P.dprime
    predicted = sum(count_sublattices(n, p, k) for k in range(K + 1))
    if predicted > budget:
        raise BudgetExceeded(f"{predicted} lattices exceeds the brute-force budget of {budget}")
    a = [sum(1 for L in enumerate_sublattices(n, p, k) if is_ideal(P, L)) for k in range(K + 1)]
    return CoefficientTable(p, K, a, P.name, "bruteforce")


def direct_sum_with_abelian(P: Presentation, r: int) -> Presentation:
    """P (+) Z^r: r extra generators that commute with everything."""
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return P
    return Presentation.from_brackets(P.d + r, P.dprime, P.brackets(), f"{P.name}+Z^{r}")
