"""Invariant factors of finite abelian groups and integer Smith normal form.

Everything here is exact: Python integers throughout, no modular shortcuts.
Invariant factors are always reported as a divisibility chain d1 | d2 | ...
with every factor >= 2; the empty chain is the trivial group.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Sequence


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant-factor list d1 | d2 | ... | dk of a finite abelian group."""

    factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for d in self.factors:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise ValueError(f"broken divisibility chain {list(self.factors)}")

    @property
    def order(self) -> int:
        n = 1
        for d in self.factors:
            n *= d
        return n

    def __str__(self) -> str:
        return "[" + ",".join(str(d) for d in self.factors) + "]"


TRIVIAL = AbelianInvariants(())


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariants_from_cyclic_orders(orders: Iterable[int]) -> AbelianInvariants:
    """Invariant factors of a direct sum of cyclic groups of the given orders."""
    primary: dict[int, list[int]] = {}
    for n in orders:
        if n < 1:
            raise ValueError(f"cyclic order {n} < 1")
        for p, e in _factorize(n).items():
            primary.setdefault(p, []).append(e)
    for exps in primary.values():
        exps.sort(reverse=True)
    k = max((len(v) for v in primary.values()), default=0)
    factors = []
    for pos in range(k):
        d = 1
        for p, exps in primary.items():
            if pos < len(exps):
                d *= p ** exps[pos]
        factors.append(d)
    factors.sort()
    return AbelianInvariants(tuple(factors))


def invariants_from_abelian_group(
    elements: Sequence,
    mul: Callable,
    identity,
) -> AbelianInvariants:
    """Invariant factors of a finite abelian group given by its elements and law.

    Uses elementary-divisor extraction by counting p^k-torsion elements: in
    a sum of cyclic p-groups with exponents lam_i the number of solutions of
    x^(p^k) = 1 is p^sum(min(lam_i, k)), so the successive count ratios read
    off the conjugate partition.
    """
    n = len(elements)
    if n == 1:
        return TRIVIAL
    element_order = {}
    for x in elements:
        k = 1
        y = x
        while y != identity:
            y = mul(y, x)
            k += 1
        element_order[x] = k
    cyclic_orders: list[int] = []
    for p, e_tot in _factorize(n).items():
        # s[k] = log_p of the p^k-torsion count; differences give the
        # conjugate partition of the exponent multiset.
        s = [0]
        k = 1
        while True:
            pk = p ** k
            cnt = sum(1 for x in elements if pk % element_order[x] == 0)
            e = _exact_log(cnt, p)
            s.append(e)
            if e == e_tot or s[-1] == s[-2]:
                break
            k += 1
        conj = [s[i] - s[i - 1] for i in range(1, len(s))]
        top = conj[0] if conj else 0
        for j in range(1, top + 1):
            cyclic_orders.append(p ** sum(1 for c in conj if c >= j))
    return invariants_from_cyclic_orders(cyclic_orders)


def pow_in_group(x, k: int, mul: Callable, identity):
    """x^k by repeated squaring under the given group law."""
    acc = identity
    base = x
    while k:
        if k & 1:
            acc = mul(acc, base)
        base = mul(base, base)
        k >>= 1
    return acc


def _exact_log(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise ValueError(f"torsion count {n * p ** e} is not a power of {p}")
    return e


def smith_normal_form(
    rows: Sequence[Sequence[int]],
    ncols: int,
    want_col_ops: bool = False,
) -> tuple[list[int], list[list[int]] | None]:
    """Diagonal of the Smith normal form of an integer matrix.

    Returns (diagonal, V) where the diagonal is the full divisibility chain
    d1 | d2 | ... (units included, zeros excluded) and V is the accumulated
    unimodular column transform (A*V has the pivots in place) when requested.
    """
    a = [list(r) for r in rows]
    nrows = len(a)
    for r in a:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)] if want_col_ops else None

    def col_op(j1: int, j2: int, q: int) -> None:
        # col j2 -= q * col j1
        for r in a:
            r[j2] -= q * r[j1]
        if v is not None:
            for r in v:
                r[j2] -= q * r[j1]

    def col_swap(j1: int, j2: int) -> None:
        for r in a:
            r[j1], r[j2] = r[j2], r[j1]
        if v is not None:
            for r in v:
                r[j1], r[j2] = r[j2], r[j1]

    diag: list[int] = []
    t = 0
    while t < nrows and t < ncols:
        # locate a pivot: nonzero entry of minimal absolute value
        pivot = None
        best = None
        for i in range(t, nrows):
            ri = a[i]
            for j in range(t, ncols):
                x = ri[j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        if pj != t:
            col_swap(t, pj)
        while True:
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        for j in range(t, ncols):
                            a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
            # clear row t right of the pivot
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        col_op(t, j, q)
                    if a[t][j]:
                        col_swap(t, j)
                        dirty = True
            if not dirty:
                break
        diag.append(abs(a[t][t]))
        t += 1
    # enforce the divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            if diag[j] % diag[i]:
                g = gcd(diag[i], diag[j])
                diag[j] = diag[i] * diag[j] // g
                diag[i] = g
    return diag, v


def quotient_invariants(rows: Sequence[Sequence[int]], ncols: int) -> AbelianInvariants:
    """Invariant factors of Z^ncols modulo the row lattice of the matrix.

    Raises if the quotient is infinite (rank < ncols).
    """
    diag, _ = smith_normal_form(rows, ncols)
    rank = sum(1 for d in diag if d != 0)
    if rank < ncols:
        raise ValueError("quotient has free rank %d: not a finite group" % (ncols - rank))
    return invariants_from_cyclic_orders(d for d in diag if d > 1)


def in_row_lattice(rows: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    """Exact membership of an integer vector in the row lattice of a matrix."""
    ncols = len(vec)
    diag, v = smith_normal_form(rows, ncols, want_col_ops=True)
    assert v is not None
    w = [sum(vec[i] * v[i][j] for i in range(ncols)) for j in range(ncols)]
    for j in range(ncols):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            if w[j] != 0:
                return False
        elif w[j] % d != 0:
            return False
    return True
