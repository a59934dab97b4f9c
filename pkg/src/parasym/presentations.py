"""Structured generator symbols, relator words, and presentation builders.

Every presentation family used by the package is built here.  Builders are
deterministic: generators are ordered lexicographically by
(kind, indices, label) and relators are emitted family by family with indices
and labels in lexicographic order, then deduplicated (exact duplicates only;
formally distinct spellings are kept so family counts stay auditable).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .abelian import AbelianInvariants, quotient_invariants
from .groups import (
    FiniteGroup,
    GTuple,
    Perm,
    act,
    perm_identity,
    transposition_factorization,
    tuple_inv,
    tuple_mul,
)

Letter = tuple["GeneratorSymbol", int]
SymWord = tuple[Letter, ...]
Word = tuple[tuple[int, int], ...]

MAX_AMALGAM_SIZE = 100_000
MAX_EXTERIOR_GROUP_ORDER = 64
MAX_SNF_SIDE = 10_000


class SizeCapExceeded(ValueError):
    """The requested presentation is above the configured construction cap."""


@dataclass(frozen=True, order=True)
class GeneratorSymbol:
    """A structured generator name.

    kinds: ``s`` Coxeter-style s_i(a); ``t`` transposition (ij)_a; ``r`` plain
    reflection (ij); ``copy`` reflection (ij) in the S_n copy indexed by a
    tuple g; ``h`` subgroup symbol h_ij(a); ``w`` wedge symbol w(g,h).
    Labels are normalized to int tuples so symbols sort lexicographically by
    (kind, indices, label).
    """

    kind: str
    indices: tuple[int, ...]
    label: tuple[int, ...]


def coxeter_sym(i: int, a: int) -> GeneratorSymbol:
    return GeneratorSymbol("s", (i,), (a,))


def transposition_sym(i: int, j: int, a: int) -> GeneratorSymbol:
    return GeneratorSymbol("t", (i, j), (a,))


def reflection_sym(i: int, j: int) -> GeneratorSymbol:
    return GeneratorSymbol("r", (i, j), ())


def copy_sym(i: int, j: int, g: GTuple) -> GeneratorSymbol:
    return GeneratorSymbol("copy", (i, j), tuple(g))


def h_sym(i: int, j: int, a: int) -> GeneratorSymbol:
    return GeneratorSymbol("h", (i, j), (a,))


def wedge_sym(g: int, h: int) -> GeneratorSymbol:
    return GeneratorSymbol("w", (), (g, h))


def winv(word: Sequence[Letter]) -> list[Letter]:
    return [(sym, -e) for sym, e in reversed(word)]


def wcomm(x: Letter, y: Letter) -> list[Letter]:
    xs, xe = x
    ys, ye = y
    return [(xs, -xe), (ys, -ye), (xs, xe), (ys, ye)]


@dataclass(frozen=True)
class Presentation:
    """Generators plus relator words, with (family, n, G) metadata."""

    generators: tuple[GeneratorSymbol, ...]
    relators: tuple[Word, ...]
    family: str
    n: int
    group: FiniteGroup | None
    extra: tuple = ()
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        index = {sym: k for k, sym in enumerate(self.generators)}
        if len(index) != len(self.generators):
            raise ValueError("duplicate generator symbols")
        object.__setattr__(self, "_index", index)
        ngen = len(self.generators)
        for rel in self.relators:
            for g, e in rel:
                if not 0 <= g < ngen:
                    raise ValueError(f"relator references unknown generator {g}")
                if e not in (1, -1):
                    raise ValueError(f"bad exponent {e}")

    def gen_index(self, sym: GeneratorSymbol) -> int:
        try:
            return self._index[sym]
        except KeyError:
            raise KeyError(f"symbol {self.symbol_name(sym)} is not a generator") from None

    def word(self, sym_word: Iterable[Letter]) -> Word:
        return tuple((self.gen_index(sym), e) for sym, e in sym_word)

    @property
    def cache_key(self) -> tuple:
        return (self.generators, self.relators)

    def element_name(self, a: int) -> str:
        if self.group is None:
            return "e" if a == 0 else f"g{a}"
        return self.group.element_name(a)

    def symbol_name(self, sym: GeneratorSymbol) -> str:
        wide = self.n > 9
        return symbol_display(sym, self.element_name, wide)

    def dump(self) -> str:
        """Deterministic plain-text dump: generators then relator token lines."""
        lines = [f"g{k} := {self.symbol_name(sym)}" for k, sym in enumerate(self.generators)]
        for rel in self.relators:
            lines.append(" ".join(f"g{g}" if e == 1 else f"g{g}^-1" for g, e in rel))
        return "\n".join(lines) + "\n"


def symbol_display(sym: GeneratorSymbol, namer, wide: bool = False) -> str:
    def pair(i: int, j: int) -> str:
        return f"({i},{j})" if wide else f"({i}{j})"

    def hpair(i: int, j: int) -> str:
        return f"{i},{j}" if wide else f"{i}{j}"

    if sym.kind == "s":
        return f"s_{sym.indices[0]}({namer(sym.label[0])})"
    if sym.kind == "t":
        return f"{pair(*sym.indices)}_{namer(sym.label[0])}"
    if sym.kind == "r":
        return pair(*sym.indices)
    if sym.kind == "copy":
        return f"{pair(*sym.indices)}^({','.join(namer(a) for a in sym.label)})"
    if sym.kind == "h":
        return f"h_{{{hpair(*sym.indices)}}}({namer(sym.label[0])})"
    if sym.kind == "w":
        return f"w({namer(sym.label[0])},{namer(sym.label[1])})"
    raise ValueError(f"unknown symbol kind {sym.kind!r}")


def _build(
    family: str,
    n: int,
    G: FiniteGroup | None,
    gens: Iterable[GeneratorSymbol],
    sym_relators: Iterable[Sequence[Letter]],
    extra: tuple = (),
) -> Presentation:
    generators = tuple(sorted(set(gens)))
    index = {sym: k for k, sym in enumerate(generators)}
    seen: set[Word] = set()
    relators: list[Word] = []
    for sw in sym_relators:
        w = tuple((index[sym], e) for sym, e in sw)
        if w and w not in seen:
            seen.add(w)
            relators.append(w)
    return Presentation(generators, tuple(relators), family, n, G, extra)


# ---------------------------------------------------------------------------
# presentation families


def coxeter_presentation(n: int, G: FiniteGroup) -> Presentation:
    """Coxeter-style presentation of S_n(G) on generators s_i(a).

    Relators: involutions s_i(a)^2; for each adjacent pair the braid-type
    family s_i(a)s_{i+1}(b)s_i(c) = s_{i+1}(a^-1 c b)s_i(a)s_{i+1}(b) together
    with its mirror image s_{i+1}(a)s_i(b)s_{i+1}(c) =
    s_i(b c a^-1)s_{i+1}(a)s_i(b); commutators for |i-j| >= 2.
    """
    if n < 2:
        raise ValueError(f"coxeter presentation needs n >= 2, got {n}")
    E = range(G.order)
    gens = [coxeter_sym(i, a) for i in range(1, n) for a in E]
    rels: list[list[Letter]] = []
    for i in range(1, n):
        for a in E:
            s = coxeter_sym(i, a)
            rels.append([(s, 1), (s, 1)])
    for i in range(1, n - 1):
        for a in E:
            for b in E:
                for c in E:
                    d = G.mul(G.mul(G.inv(a), c), b)
                    lhs = [(coxeter_sym(i, a), 1), (coxeter_sym(i + 1, b), 1), (coxeter_sym(i, c), 1)]
                    rhs = [(coxeter_sym(i + 1, d), 1), (coxeter_sym(i, a), 1), (coxeter_sym(i + 1, b), 1)]
                    rels.append(lhs + winv(rhs))
    for i in range(1, n - 1):
        for a in E:
            for b in E:
                for c in E:
                    d = G.mul(G.mul(b, c), G.inv(a))
                    lhs = [(coxeter_sym(i + 1, a), 1), (coxeter_sym(i, b), 1), (coxeter_sym(i + 1, c), 1)]
                    rhs = [(coxeter_sym(i, d), 1), (coxeter_sym(i + 1, a), 1), (coxeter_sym(i, b), 1)]
                    rels.append(lhs + winv(rhs))
    for i in range(1, n):
        for j in range(i + 2, n):
            for a in E:
                for b in E:
                    rels.append(wcomm((coxeter_sym(i, a), 1), (coxeter_sym(j, b), 1)))
    return _build("coxeter", n, G, gens, rels)


def transposition_presentation(n: int, G: FiniteGroup) -> Presentation:
    """Presentation of S_n(G) on all labeled transpositions (ij)_a.

    Relator families: squares; (ij)_a^((jk)_b) = (ik)_{ab} for distinct
    i, j, k; commutators for disjoint index pairs; (ij)_a = (ji)_{a^-1}.
    """
    if n < 3:
        raise ValueError(f"transposition presentation needs n >= 3, got {n}")
    E = range(G.order)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    gens = [transposition_sym(i, j, a) for i, j in pairs for a in E]
    rels: list[list[Letter]] = []
    for i, j in pairs:
        for a in E:
            s = transposition_sym(i, j, a)
            rels.append([(s, 1), (s, 1)])
    for i, j, k in itertools.permutations(range(1, n + 1), 3):
        for a in E:
            for b in E:
                x = transposition_sym(i, j, a)
                y = transposition_sym(j, k, b)
                z = transposition_sym(i, k, G.mul(a, b))
                rels.append([(y, -1), (x, 1), (y, 1), (z, -1)])
    for i, j, k, l in itertools.permutations(range(1, n + 1), 4):
        for a in E:
            for b in E:
                rels.append(wcomm((transposition_sym(i, j, a), 1), (transposition_sym(k, l, b), 1)))
    for i, j in pairs:
        for a in E:
            rels.append([(transposition_sym(i, j, a), 1), (transposition_sym(j, i, G.inv(a)), -1)])
    return _build("transposition", n, G, gens, rels)


def reflection_presentation_sn(n: int) -> Presentation:
    """Redundant reflection presentation of S_n on all ordered (ij)."""
    if n < 3:
        raise ValueError(f"reflection presentation needs n >= 3, got {n}")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    gens = [reflection_sym(i, j) for i, j in pairs]
    rels: list[list[Letter]] = []
    for i, j in pairs:
        s = reflection_sym(i, j)
        rels.append([(s, 1), (s, 1)])
    for i, j, k in itertools.permutations(range(1, n + 1), 3):
        x, y, z = reflection_sym(i, j), reflection_sym(j, k), reflection_sym(i, k)
        rels.append([(y, -1), (x, 1), (y, 1), (z, -1)])
    for i, j, k, l in itertools.permutations(range(1, n + 1), 4):
        rels.append(wcomm((reflection_sym(i, j), 1), (reflection_sym(k, l), 1)))
    for i, j in pairs:
        rels.append([(reflection_sym(i, j), 1), (reflection_sym(j, i), -1)])
    return _build("reflection", n, None, gens, rels)


def interpolating_presentation(n: int, t: int, G: FiniteGroup) -> Presentation:
    """The band presentation S_n(t, G): generators (ij)_a with i<j, j-i <= t.

    Families: squares; (ij)_a^((jk)_b) = (jk)_{b'}^((ij)_{a'}) whenever
    ab = a'b'; disjoint commutators; (ij)_a^((jk)_b) = (ik)_{ab} whenever
    (ik) is itself a generator.  Index constraints are exactly "all symbols
    appearing must be generators".
    """
    if n < 3:
        raise ValueError(f"interpolating presentation needs n >= 3, got {n}")
    if not 1 <= t <= n - 1:
        raise ValueError(f"band parameter t={t} out of range for n={n}")
    E = range(G.order)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if j - i <= t]
    pset = set(pairs)
    gens = [transposition_sym(i, j, a) for i, j in pairs for a in E]
    rels: list[list[Letter]] = []
    for i, j in pairs:
        for a in E:
            s = transposition_sym(i, j, a)
            rels.append([(s, 1), (s, 1)])
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        if (i, j) in pset and (j, k) in pset:
            for a in E:
                for b in E:
                    for a2 in E:
                        b2 = G.mul(G.inv(a2), G.mul(a, b))
                        x, y = transposition_sym(i, j, a), transposition_sym(j, k, b)
                        x2, y2 = transposition_sym(i, j, a2), transposition_sym(j, k, b2)
                        rels.append([(y, -1), (x, 1), (y, 1)] + winv([(x2, -1), (y2, 1), (x2, 1)]))
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        if len({i, j, k, l}) == 4:
            for a in E:
                for b in E:
                    rels.append(wcomm((transposition_sym(i, j, a), 1), (transposition_sym(k, l, b), 1)))
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        if (i, j) in pset and (j, k) in pset and (i, k) in pset:
            for a in E:
                for b in E:
                    x, y = transposition_sym(i, j, a), transposition_sym(j, k, b)
                    z = transposition_sym(i, k, G.mul(a, b))
                    rels.append([(y, -1), (x, 1), (y, 1), (z, -1)])
    return _build("interpolating", n, G, gens, rels, extra=(t,))


def fixed_tuples(n: int, G: FiniteGroup, s: Perm) -> list[GTuple]:
    """All tuples in G^n fixed by the action of s, in lex order."""
    return [g for g in itertools.product(range(G.order), repeat=n) if act(s, g) == g]


def identification_pairs(n: int, G: FiniteGroup, s: Perm) -> Iterator[tuple[GTuple, GTuple]]:
    """All ordered pairs (g, h) with h*g^-1 fixed by s.

    There are exactly |G|^n * |Fix(s)| of them: one pair (g, z*g) per fixed
    tuple z and arbitrary g.
    """
    for z in fixed_tuples(n, G, s):
        for g in itertools.product(range(G.order), repeat=n):
            yield g, tuple_mul(G, z, g)


def amalgam_presentation(n: int, G: FiniteGroup, size_cap: int = MAX_AMALGAM_SIZE) -> Presentation:
    """Amalgam of |G|^n copies of S_n with crosswise identifications.

    Each copy g carries the reflection presentation on symbols (ij)^(g); on
    top, for every permutation s and every pair of copies g, h such that the
    action of s fixes h*g^-1, the fixed transposition factorization W_s is
    identified across the two copies.  Pairs are emitted once per unordered
    pair (the reversed relator is the exact inverse word).
    """
    if n < 2:
        raise ValueError(f"amalgam presentation needs n >= 2, got {n}")
    import math

    if G.order ** n * math.factorial(n) > size_cap:
        raise SizeCapExceeded(
            f"|G|^n * n! = {G.order ** n * math.factorial(n)} exceeds cap {size_cap}")
    copies = list(itertools.product(range(G.order), repeat=n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    gens = [copy_sym(i, j, g) for g in copies for i, j in pairs]
    rels: list[list[Letter]] = []
    for g in copies:
        for i, j in pairs:
            s = copy_sym(i, j, g)
            rels.append([(s, 1), (s, 1)])
        for i, j, k in itertools.permutations(range(1, n + 1), 3):
            x, y, z = copy_sym(i, j, g), copy_sym(j, k, g), copy_sym(i, k, g)
            rels.append([(y, -1), (x, 1), (y, 1), (z, -1)])
        for i, j, k, l in itertools.permutations(range(1, n + 1), 4):
            rels.append(wcomm((copy_sym(i, j, g), 1), (copy_sym(k, l, g), 1)))
        for i, j in pairs:
            rels.append([(copy_sym(i, j, g), 1), (copy_sym(j, i, g), -1)])
    identity = perm_identity(n)
    for s in sorted(itertools.permutations(range(n))):
        if s == identity:
            continue
        word = transposition_factorization(s)
        for z in fixed_tuples(n, G, s):
            if all(a == 0 for a in z):
                continue
            for g in copies:
                h = tuple_mul(G, z, g)
                if g < h:
                    left = [(copy_sym(i, j, g), 1) for i, j in word]
                    right = [(copy_sym(i, j, h), 1) for i, j in word]
                    rels.append(left + winv(right))
    return _build("amalgam", n, G, gens, rels)


def hs_presentation(n: int, G: FiniteGroup) -> Presentation:
    """Presentation of the label-kernel subgroup on symbols h_ij(a).

    Families: h_ij(1) = 1; h_ij(a)h_ji(a) = 1; h_jk(b)h_ik(a)h_ij(b) =
    h_ik(ab); disjoint commutators; h_ij(a)^-1 = h_ij(a^-1).
    """
    if n < 3:
        raise ValueError(f"hs presentation needs n >= 3, got {n}")
    E = range(G.order)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    gens = [h_sym(i, j, a) for i, j in pairs for a in E]
    rels: list[list[Letter]] = []
    for i, j in pairs:
        rels.append([(h_sym(i, j, 0), 1)])
    for i, j in pairs:
        for a in E:
            rels.append([(h_sym(i, j, a), 1), (h_sym(j, i, a), 1)])
    for i, j, k in itertools.permutations(range(1, n + 1), 3):
        for a in E:
            for b in E:
                rels.append([
                    (h_sym(j, k, b), 1), (h_sym(i, k, a), 1), (h_sym(i, j, b), 1),
                    (h_sym(i, k, G.mul(a, b)), -1),
                ])
    for i, j, k, l in itertools.permutations(range(1, n + 1), 4):
        for a in E:
            for b in E:
                rels.append(wcomm((h_sym(i, j, a), 1), (h_sym(k, l, b), 1)))
    for i, j in pairs:
        for a in E:
            rels.append([(h_sym(i, j, a), 1), (h_sym(i, j, G.inv(a)), 1)])
    return _build("hs", n, G, gens, rels)


HN_FAMILIES = ("H1", "H2", "H3", "H4", "H5")


def hn_presentation(n: int, G: FiniteGroup, include: Iterable[str] | None = None) -> Presentation:
    """The five-family presentation on h_ij(u) (any subset of H1..H5).

    H1: h_ij(u)h_ji(u) = 1.  H2: h_ij(u)h_ki(u)h_jk(u) = 1.
    H3 (j != k): h_ij(u)h_ik(v)h_ij(u)^-1 = h_ik(uv)h_ik(u)^-1.
    H4 (i != k): h_ij(u)h_kj(v)h_ij(u)^-1 = h_kj(vu)h_kj(u)^-1.
    H5: disjoint commutators.
    """
    if n < 3:
        raise ValueError(f"hn presentation needs n >= 3, got {n}")
    wanted = tuple(HN_FAMILIES) if include is None else tuple(include)
    for f in wanted:
        if f not in HN_FAMILIES:
            raise ValueError(f"unknown relator family {f!r}")
    E = range(G.order)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    gens = [h_sym(i, j, a) for i, j in pairs for a in E]
    rels: list[list[Letter]] = []
    if "H1" in wanted:
        for i, j in pairs:
            for u in E:
                rels.append([(h_sym(i, j, u), 1), (h_sym(j, i, u), 1)])
    if "H2" in wanted:
        for i, j, k in itertools.permutations(range(1, n + 1), 3):
            for u in E:
                rels.append([(h_sym(i, j, u), 1), (h_sym(k, i, u), 1), (h_sym(j, k, u), 1)])
    if "H3" in wanted:
        for i, j, k in itertools.permutations(range(1, n + 1), 3):
            for u in E:
                for v in E:
                    rels.append([
                        (h_sym(i, j, u), 1), (h_sym(i, k, v), 1), (h_sym(i, j, u), -1),
                        (h_sym(i, k, u), 1), (h_sym(i, k, G.mul(u, v)), -1),
                    ])
    if "H4" in wanted:
        for i, j, k in itertools.permutations(range(1, n + 1), 3):
            for u in E:
                for v in E:
                    rels.append([
                        (h_sym(i, j, u), 1), (h_sym(k, j, v), 1), (h_sym(i, j, u), -1),
                        (h_sym(k, j, u), 1), (h_sym(k, j, G.mul(v, u)), -1),
                    ])
    if "H5" in wanted:
        for i, j, k, l in itertools.permutations(range(1, n + 1), 4):
            for u in E:
                for v in E:
                    rels.append(wcomm((h_sym(i, j, u), 1), (h_sym(k, l, v), 1)))
    return _build("hn", n, G, gens, rels, extra=(wanted,))


def r4_relators(P: Presentation) -> list[Word]:
    """The h_ij(a)h_ij(a^-1) relator family over P's h-symbol generators."""
    G = P.group
    assert G is not None
    out = []
    for sym in P.generators:
        i, j = sym.indices
        a = sym.label[0]
        out.append(P.word([(h_sym(i, j, a), 1), (h_sym(i, j, G.inv(a)), 1)]))
    return out


def with_extra_relators(P: Presentation, extra_relators: Iterable[Word], tag: str) -> Presentation:
    """P with additional relators appended (same generators)."""
    seen = set(P.relators)
    new = list(P.relators)
    for w in extra_relators:
        if w and w not in seen:
            seen.add(w)
            new.append(w)
    return Presentation(P.generators, tuple(new), f"{P.family}+{tag}", P.n, P.group, P.extra)


def exterior_square_presentation(G: FiniteGroup) -> Presentation:
    """Presentation of the exterior square on symbols w(g,h), g,h in G.

    Relators: w(g,g); w(gg',h) = w(g^g', h^g') w(g',h);
    w(g,hh') = w(g,h') w(g^h', h^h'), with x^y = y^-1 x y.
    """
    if G.order > MAX_EXTERIOR_GROUP_ORDER:
        raise SizeCapExceeded(f"|G| = {G.order} exceeds cap {MAX_EXTERIOR_GROUP_ORDER}")
    E = range(G.order)
    gens = [wedge_sym(g, h) for g in E for h in E]
    rels: list[list[Letter]] = []
    for g in E:
        rels.append([(wedge_sym(g, g), 1)])
    for g in E:
        for g2 in E:
            for h in E:
                lhs = [(wedge_sym(G.mul(g, g2), h), 1)]
                rhs = [(wedge_sym(G.conj(g, g2), G.conj(h, g2)), 1), (wedge_sym(g2, h), 1)]
                rels.append(lhs + winv(rhs))
    for g in E:
        for h in E:
            for h2 in E:
                lhs = [(wedge_sym(g, G.mul(h, h2)), 1)]
                rhs = [(wedge_sym(g, h2), 1), (wedge_sym(G.conj(g, h2), G.conj(h, h2)), 1)]
                rels.append(lhs + winv(rhs))
    return _build("exterior", 1, G, gens, rels)


def exponent_matrix(P: Presentation) -> list[list[int]]:
    rows = []
    for rel in P.relators:
        row = [0] * len(P.generators)
        for g, e in rel:
            row[g] += e
        rows.append(row)
    return rows


def abelian_invariants_of_presentation(P: Presentation) -> AbelianInvariants:
    """Invariant factors of the presented group's abelianization (exact SNF).

    Raises ValueError when the abelianization is infinite.
    """
    if len(P.generators) > MAX_SNF_SIDE or len(P.relators) > MAX_SNF_SIDE:
        raise SizeCapExceeded("presentation too large for the SNF path")
    return quotient_invariants(exponent_matrix(P), len(P.generators))
