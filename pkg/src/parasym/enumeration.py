"""Todd-Coxeter coset enumeration and permutation representations.

The strategy is HLT: relators are scanned (and filled) at every live coset in
definition order, with immediate coincidence processing.  Coset 0 is the
subgroup coset and can never die; new cosets are created either inside a
relator scan or when filling the remaining undefined entries of a row, always
in first-missing-entry order with generator columns in declaration order.
The whole construction is deterministic.

Capacity is a value, not a fault: hitting the coset cap yields a table with
status "capacity-exceeded".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .abelian import in_row_lattice
from .groups import Perm, perm_identity
from .presentations import Presentation, Word, exponent_matrix

DEFAULT_MAX_COSETS = 1_000_000

Status = Literal["complete", "capacity-exceeded"]


class _Capacity(Exception):
    pass


@dataclass(frozen=True)
class CosetTable:
    """Result of an enumeration.

    For each coset, the row holds one entry per column; column 2k is
    generator k, column 2k+1 its inverse.  Complete tables are closed and
    relator-compatible (re-verified on construction).
    """

    presentation: Presentation
    coset_count: int
    rows: tuple[tuple[int, ...], ...]
    status: Status
    max_cosets: int

    @property
    def is_complete(self) -> bool:
        return self.status == "complete"

    def dump(self) -> str:
        """One line per coset: the images under every generator column."""
        return "\n".join(" ".join(str(x) for x in row) for row in self.rows) + "\n"


def word_columns(word: Word) -> tuple[int, ...]:
    return tuple(2 * g if e == 1 else 2 * g + 1 for g, e in word)


def todd_coxeter(
    P: Presentation,
    subgroup: Sequence[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
) -> CosetTable:
    """Enumerate the cosets of <subgroup> in the group presented by P.

    With an empty subgroup the cosets are the group elements (the regular
    representation) and coset_count is the group order.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    ngens = len(P.generators)
    ncols = 2 * ngens
    relators = [word_columns(w) for w in P.relators]
    sub_words = [word_columns(w) for w in subgroup]
    for w in sub_words:
        for c in w:
            if not 0 <= c < ncols:
                raise ValueError("malformed subgroup word")

    table: list[list[int]] = [[-1] * ncols]
    p: list[int] = [0]

    def rep(k: int) -> int:
        while p[k] != k:
            p[k] = p[p[k]]
            k = p[k]
        return k

    def new_coset(f: int, col: int) -> int:
        if len(table) >= max_cosets:
            raise _Capacity
        b = len(table)
        p.append(b)
        row = [-1] * ncols
        table.append(row)
        table[f][col] = b
        row[col ^ 1] = f
        return b

    def coincidence(a: int, b: int) -> None:
        a = rep(a)
        b = rep(b)
        if a == b:
            return
        queue = [(a, b)]
        qi = 0
        while qi < len(queue):
            x, y = queue[qi]
            qi += 1
            x = rep(x)
            y = rep(y)
            if x == y:
                continue
            if y < x:
                x, y = y, x
            p[y] = x
            row = table[y]
            for c in range(ncols):
                d = row[c]
                if d < 0:
                    continue
                # drop the back-reference from d to the dead coset
                dr = rep(d)
                mu = rep(x)
                ex = table[mu][c]
                if ex >= 0:
                    queue.append((rep(ex), dr))
                else:
                    exb = table[dr][c ^ 1]
                    if exb >= 0 and rep(exb) != mu:
                        queue.append((rep(exb), mu))
                    table[mu][c] = dr
                    table[dr][c ^ 1] = mu

    def scan_and_fill(a: int, w: tuple[int, ...]) -> None:
        if not w:
            return
        f = a
        i = 0
        b = a
        j = len(w) - 1
        while True:
            while i <= j:
                t = table[f][w[i]]
                if t < 0:
                    break
                f = rep(t)
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i:
                t = table[b][w[j] ^ 1]
                if t < 0:
                    break
                b = rep(t)
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            f = new_coset(f, w[i])
            i += 1

    try:
        for w in sub_words:
            scan_and_fill(0, w)
        alpha = 0
        while alpha < len(table):
            if p[alpha] != alpha:
                alpha += 1
                continue
            for w in relators:
                scan_and_fill(alpha, w)
                if p[alpha] != alpha:
                    break
            if p[alpha] == alpha:
                row = table[alpha]
                for c in range(ncols):
                    if row[c] < 0:
                        new_coset(alpha, c)
            alpha += 1
    except _Capacity:
        live = sum(1 for i in range(len(table)) if p[i] == i)
        return CosetTable(P, live, (), "capacity-exceeded", max_cosets)

    # compress to live cosets in definition order
    live = [i for i in range(len(table)) if p[i] == i]
    remap = {old: new for new, old in enumerate(live)}
    rows = tuple(tuple(remap[rep(x)] for x in table[old]) for old in live)
    result = CosetTable(P, len(live), rows, "complete", max_cosets)
    _validate_complete(result, relators, sub_words)
    return result


def _validate_complete(T: CosetTable, relators, sub_words) -> None:
    rows = T.rows
    for a, row in enumerate(rows):
        for c, x in enumerate(row):
            if x < 0:
                raise AssertionError("incomplete row in a complete table")
            if rows[x][c ^ 1] != a:
                raise AssertionError("inconsistent inverse entries")
    for w in relators:
        for a in range(T.coset_count):
            x = a
            for c in w:
                x = rows[x][c]
            if x != a:
                raise AssertionError("relator scan does not close")
    for w in sub_words:
        x = 0
        for c in w:
            x = rows[x][c]
        if x != 0:
            raise AssertionError("subgroup generator moves coset 0")


@dataclass(frozen=True)
class PermutationRep:
    """Permutations of the cosets, one per generator, plus numpy mirrors."""

    presentation: Presentation
    degree: int
    images: tuple[Perm, ...]
    _np: dict = field(default_factory=dict, compare=False, repr=False)

    def image_np(self, gen: int, exp: int = 1) -> np.ndarray:
        key = (gen, exp)
        arr = self._np.get(key)
        if arr is None:
            if exp == 1:
                arr = np.array(self.images[gen], dtype=np.int32)
            else:
                fwd = self.image_np(gen, 1)
                arr = np.empty_like(fwd)
                arr[fwd] = np.arange(self.degree, dtype=np.int32)
            self._np[key] = arr
        return arr

    def word_np(self, word: Word) -> np.ndarray:
        """The permutation of a word as a numpy array (left letter first)."""
        out = np.arange(self.degree, dtype=np.int32)
        for g, e in word:
            out = self.image_np(g, e)[out]
        return out

    def is_identity_word(self, word: Word) -> bool:
        arr = self.word_np(word)
        return bool((arr == np.arange(self.degree, dtype=np.int32)).all())


def permutation_rep(T: CosetTable) -> PermutationRep:
    """Per-generator coset permutations of a complete table.

    Postcondition (re-checked): every defining relator evaluates to the
    identity permutation and the action is transitive.
    """
    if not T.is_complete:
        raise ValueError("incomplete table has no permutation representation")
    degree = T.coset_count
    images = tuple(tuple(row[2 * k] for row in T.rows) for k in range(len(T.presentation.generators)))
    rep = PermutationRep(T.presentation, degree, images)
    ident = np.arange(degree, dtype=np.int32)
    for w in T.presentation.relators:
        if not (rep.word_np(w) == ident).all():
            raise AssertionError("relator does not act trivially")
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for img in images:
                y = img[x]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    if len(seen) != degree:
        raise AssertionError("coset action is not transitive")
    return rep


def evaluate_word(R: PermutationRep, word: Word) -> Perm:
    """Product of the generator images along the word, left letter first."""
    for g, e in word:
        if not 0 <= g < len(R.images):
            raise ValueError(f"unknown generator {g}")
    return tuple(int(x) for x in R.word_np(word))


# ---------------------------------------------------------------------------
# cached regular representations

_REGULAR_CACHE: dict = {}


def regular_table(P: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Cached trivial-subgroup enumeration of P."""
    key = P.cache_key
    hit = _REGULAR_CACHE.get(key)
    if hit is not None:
        table = hit
        if table.is_complete or table.max_cosets >= max_cosets:
            return table
    table = todd_coxeter(P, (), max_cosets)
    _REGULAR_CACHE[key] = table
    return table


def regular_rep(P: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> PermutationRep | None:
    """Cached regular representation; None when the cap was hit."""
    key = ("rep", P.cache_key)
    hit = _REGULAR_CACHE.get(key)
    if hit is not None:
        return hit
    T = regular_table(P, max_cosets)
    if not T.is_complete:
        return None
    rep = permutation_rep(T)
    _REGULAR_CACHE[key] = rep
    return rep


def clear_cache() -> None:
    _REGULAR_CACHE.clear()


def is_consequence(
    P: Presentation,
    word: Word,
    max_cosets: int = DEFAULT_MAX_COSETS,
) -> tuple[str, int | None]:
    """Decide whether a word is a consequence of P's relators.

    Returns ("yes", None), ("no", witness) or ("timeout", None).  The witness
    is a coset moved by the word; when only the abelianized obstruction is
    available (enumeration hit the cap but the word is already nontrivial in
    the abelianization) the witness is -1.
    """
    ngen = len(P.generators)
    for g, e in word:
        if not 0 <= g < ngen:
            raise ValueError(f"malformed word: unknown generator {g}")
        if e not in (1, -1):
            raise ValueError(f"malformed word: exponent {e}")
    T = regular_table(P, max_cosets)
    if T.is_complete:
        rep = regular_rep(P, max_cosets)
        assert rep is not None
        perm = evaluate_word(rep, word)
        for a, x in enumerate(perm):
            if x != a:
                return "no", a
        return "yes", None
    vec = [0] * ngen
    for g, e in word:
        vec[g] += e
    if not in_row_lattice(exponent_matrix(P), vec):
        return "no", -1
    return "timeout", None
