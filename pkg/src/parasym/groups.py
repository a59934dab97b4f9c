"""Exact finite-group arithmetic on multiplication tables.

Conventions, fixed once for the whole package and certified by tests:

* elements of a finite group are indices 0..order-1 with the identity at 0;
* permutations are tuples ``p`` with ``p[i]`` the image of point ``i``
  (0-based), composed left factor first: ``(p*q)(i) = q(p(i))``;
* the permutation action on tuples is ``act(s, g)[i] = g[s[i]]``, and the
  wreath product G^n x| S_n multiplies as ``(a,s)(b,t) = (a*act(s,b), s*t)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

from .abelian import AbelianInvariants, invariants_from_abelian_group

Perm = tuple[int, ...]
GTuple = tuple[int, ...]

FULL_ASSOC_CHECK_MAX_ORDER = 64
MAX_TABLE_ORDER = 10_000


class NotAGroupError(ValueError):
    """The table fails a group axiom (Latin square / associativity / identity)."""


class TableParseError(ValueError):
    """The multiplication-table text is malformed."""


class UnknownGroupError(ValueError):
    """Unrecognized builtin group name."""


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``table[a][b]`` is the index of the product a*b; index 0 is the identity.
    """

    order: int
    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None
    label: str = ""
    _inv: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        _validate_table(self.order, self.table)
        if self.names is not None and len(self.names) != self.order:
            raise NotAGroupError("names length != order")
        inv = [0] * self.order
        for a in range(self.order):
            row = self.table[a]
            inv[a] = row.index(0)
        object.__setattr__(self, "_inv", tuple(inv))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, x: int, y: int) -> int:
        """y^-1 x y."""
        return self.mul(self.mul(self._inv[y], x), y)

    def comm(self, x: int, y: int) -> int:
        """[x, y] = x^-1 y^-1 x y."""
        return self.mul(self.mul(self._inv[x], self._inv[y]), self.mul(x, y))

    def elements(self) -> range:
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def element_name(self, a: int) -> str:
        if self.names is not None:
            return self.names[a]
        return "e" if a == 0 else f"g{a}"

    def element_index(self, token: str) -> int:
        """Resolve an element label: a declared name, 'e', or 'g<k>'."""
        if self.names is not None and token in self.names:
            return self.names.index(token)
        if token == "e":
            return 0
        if token.startswith("g") and token[1:].isdigit():
            k = int(token[1:])
            if 0 <= k < self.order:
                return k
        raise ValueError(f"unknown element label {token!r} for group {self.label or 'of order %d' % self.order}")

    def __str__(self) -> str:
        return self.label or f"group<{self.order}>"


def _validate_table(order: int, table: tuple[tuple[int, ...], ...]) -> None:
    if order < 1 or len(table) != order:
        raise NotAGroupError("table size does not match order")
    for row in table:
        if len(row) != order:
            raise NotAGroupError("ragged table")
        for x in row:
            if not 0 <= x < order:
                raise NotAGroupError("entry out of range")
    for a in range(order):
        if table[0][a] != a or table[a][0] != a:
            raise NotAGroupError("row/column 0 must be the identity (identity-not-zero)")
    full = set(range(order))
    for a in range(order):
        if set(table[a]) != full:
            raise NotAGroupError(f"row {a} is not a permutation (not a Latin square)")
        if {table[b][a] for b in range(order)} != full:
            raise NotAGroupError(f"column {a} is not a permutation (not a Latin square)")
    if order <= FULL_ASSOC_CHECK_MAX_ORDER:
        for a in range(order):
            ta = table[a]
            for b in range(order):
                tab = table[ta[b]]
                tb = table[b]
                for c in range(order):
                    if tab[c] != ta[tb[c]]:
                        raise NotAGroupError(f"associativity fails at ({a},{b},{c})")
    else:
        rng = random.Random(0x5EED)
        for _ in range(10 * order * order):
            a, b, c = (rng.randrange(order) for _ in range(3))
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise NotAGroupError(f"associativity fails at ({a},{b},{c})")


def _table_from_mul(order: int, mul: Callable[[int, int], int], names=None, label="") -> FiniteGroup:
    table = tuple(tuple(mul(a, b) for b in range(order)) for a in range(order))
    return FiniteGroup(order, table, tuple(names) if names else None, label)


def cyclic_group(k: int) -> FiniteGroup:
    names = ["e"] + [f"a{i}" if i > 1 else "a" for i in range(1, k)]
    return _table_from_mul(k, lambda a, b: (a + b) % k, names, f"c{k}")


def direct_product(g1: FiniteGroup, g2: FiniteGroup, label: str = "") -> FiniteGroup:
    n2 = g2.order

    def mul(a: int, b: int) -> int:
        a1, a2 = divmod(a, n2)
        b1, b2 = divmod(b, n2)
        return g1.mul(a1, b1) * n2 + g2.mul(a2, b2)

    return _table_from_mul(g1.order * g2.order, mul, None, label or f"{g1.label}x{g2.label}")


def _group_from_elements(elems: list, mul, label: str, names=None) -> FiniteGroup:
    index = {e: i for i, e in enumerate(elems)}
    return _table_from_mul(len(elems), lambda a, b: index[mul(elems[a], elems[b])], names, label)


def symmetric_group_table(n: int) -> FiniteGroup:
    import itertools

    elems = sorted(itertools.permutations(range(n)))
    names = None
    if n == 3:
        cycle_names = {
            (0, 1, 2): "e", (1, 0, 2): "s12", (0, 2, 1): "s23", (2, 1, 0): "s13",
            (1, 2, 0): "c123", (2, 0, 1): "c132",
        }
        names = [cycle_names[e] for e in elems]
    return _group_from_elements(elems, perm_mul, f"s{n}", names)


def alternating_group_table(n: int) -> FiniteGroup:
    import itertools

    def parity(p: Perm) -> int:
        s = 0
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                s += p[i] > p[j]
        return s & 1

    elems = sorted(p for p in itertools.permutations(range(n)) if parity(p) == 0)
    return _group_from_elements(elems, perm_mul, f"a{n}")


def dihedral_group_table(k: int) -> FiniteGroup:
    # elements r^i f^j, encoded i + k*j
    def mul(a: int, b: int) -> int:
        i1, j1 = a % k, a // k
        i2, j2 = b % k, b // k
        i = (i2 + i1) % k if j2 == 0 else (i2 - i1) % k
        return i + k * ((j1 + j2) % 2)

    names = [f"r{i}" if i > 1 else ("e" if i == 0 else "r") for i in range(k)]
    names += [("f" if i == 0 else f"r{i}f" if i > 1 else "rf") for i in range(k)]
    return _table_from_mul(2 * k, mul, names, f"d{k}")


def quaternion_group_table() -> FiniteGroup:
    # indices: e, m1 (=-1), i, mi, j, mj, k, mk
    names = ["e", "m1", "i", "mi", "j", "mj", "k", "mk"]
    sign = [1, -1, 1, -1, 1, -1, 1, -1]
    axis = [0, 0, 1, 1, 2, 2, 3, 3]  # 0 = scalar, 1 = i, 2 = j, 3 = k

    def enc(s: int, ax: int) -> int:
        base = {0: 0, 1: 2, 2: 4, 3: 6}[ax]
        return base + (0 if s == 1 else 1)

    mul_axis = {
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
        (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
    }

    def mul(a: int, b: int) -> int:
        sa, xa, sb, xb = sign[a], axis[a], sign[b], axis[b]
        if xa == 0:
            return enc(sa * sb, xb)
        if xb == 0:
            return enc(sa * sb, xa)
        s, x = mul_axis[(xa, xb)]
        return enc(sa * sb * s, x)

    return _table_from_mul(8, mul, names, "q8")


_BUILTIN_FACTORIES: dict[str, Callable[[], FiniteGroup]] = {
    "trivial": lambda: cyclic_group(1),
    "c1": lambda: cyclic_group(1),
    "c2": lambda: cyclic_group(2),
    "c3": lambda: cyclic_group(3),
    "c4": lambda: cyclic_group(4),
    "c6": lambda: cyclic_group(6),
    "klein": lambda: _klein(),
    "c4xc2": lambda: direct_product(cyclic_group(4), cyclic_group(2), "c4xc2"),
    "c2cubed": lambda: direct_product(direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(2), "c2cubed"),
    "s3": lambda: symmetric_group_table(3),
    "d4": lambda: dihedral_group_table(4),
    "q8": quaternion_group_table,
    "a4": lambda: alternating_group_table(4),
}


def _klein() -> FiniteGroup:
    g = direct_product(cyclic_group(2), cyclic_group(2), "klein")
    return FiniteGroup(4, g.table, ("e", "a", "b", "ab"), "klein")


def make_builtin(name: str) -> FiniteGroup:
    """Builtin group by name, or a direct product expression like ``c2xc3``."""
    if name in _BUILTIN_FACTORIES:
        return _BUILTIN_FACTORIES[name]()
    if "x" in name:
        for pos in (i for i, ch in enumerate(name) if ch == "x"):
            left, right = name[:pos], name[pos + 1:]
            try:
                return direct_product(make_builtin(left), make_builtin(right), name)
            except UnknownGroupError:
                continue
    raise UnknownGroupError(f"unknown group name {name!r}")


BUILTIN_NAMES = ("c2", "c3", "c4", "c6", "klein", "c4xc2", "c2cubed", "s3", "d4", "q8", "a4")


def parse_multiplication_table(text: str) -> FiniteGroup:
    """Parse the plain-text multiplication table format.

    Line 1: the order m.  Lines 2..m+1: m space-separated indices, row r
    column c giving (element r)*(element c).  Optional trailing line
    ``names: n0 n1 ...``.  Identity must be element 0.
    """
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise TableParseError("empty input")
    try:
        order = int(lines[0].strip())
    except ValueError as exc:
        raise TableParseError(f"bad order line {lines[0]!r}") from exc
    if order < 1:
        raise TableParseError("order must be positive")
    if order > MAX_TABLE_ORDER:
        raise TableParseError(f"order {order} exceeds the table cap {MAX_TABLE_ORDER}")
    if len(lines) < order + 1:
        raise TableParseError(f"expected {order} table rows, found {len(lines) - 1}")
    rows = []
    for r in range(1, order + 1):
        parts = lines[r].split()
        if len(parts) != order:
            raise TableParseError(f"row {r} has {len(parts)} entries, expected {order}")
        try:
            row = tuple(int(tok) for tok in parts)
        except ValueError as exc:
            raise TableParseError(f"non-integer entry in row {r}") from exc
        rows.append(row)
    names = None
    rest = lines[order + 1:]
    if rest:
        if len(rest) > 1 or not rest[0].startswith("names:"):
            raise TableParseError("unexpected trailing content")
        names = tuple(rest[0][len("names:"):].split())
        if len(names) != order:
            raise TableParseError("names count != order")
    return FiniteGroup(order, tuple(rows), names, "file")


def format_multiplication_table(G: FiniteGroup) -> str:
    out = [str(G.order)]
    out += [" ".join(str(x) for x in row) for row in G.table]
    if G.names is not None:
        out.append("names: " + " ".join(G.names))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# permutations


def perm_identity(n: int) -> Perm:
    return tuple(range(n))


def perm_mul(p: Perm, q: Perm) -> Perm:
    """Apply p first, then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def transposition(n: int, i: int, j: int) -> Perm:
    """The transposition (i j) on 1-based points."""
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise ValueError(f"bad transposition ({i} {j}) for n={n}")
    p = list(range(n))
    p[i - 1], p[j - 1] = p[j - 1], p[i - 1]
    return tuple(p)


def perm_conj(s: Perm, t: Perm) -> Perm:
    """t^-1 s t."""
    return perm_mul(perm_mul(perm_inv(t), s), t)


def transposition_factorization(s: Perm) -> tuple[tuple[int, int], ...]:
    """A fixed factorization of s into transpositions (1-based pairs).

    The returned pairs multiply to s left factor first.  Cycles are taken in
    order of their minimal point; a cycle (c0 c1 ... c_{p-1}) contributes
    (c_{p-2} c_{p-1}), ..., (c0 c1).
    """
    n = len(s)
    seen = [False] * n
    word: list[tuple[int, int]] = []
    for start in range(n):
        if seen[start] or s[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        x = s[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = s[x]
        for k in range(len(cyc) - 2, -1, -1):
            word.append((cyc[k] + 1, cyc[k + 1] + 1))
    acc = perm_identity(n)
    for i, j in word:
        acc = perm_mul(acc, transposition(n, i, j))
    assert acc == s, "transposition factorization is wrong"
    return tuple(word)


# ---------------------------------------------------------------------------
# tuples and the wreath product


def act(s: Perm, g: GTuple) -> GTuple:
    """The fixed tuple action: act(s, g)[i] = g[s(i)]."""
    return tuple(g[s[i]] for i in range(len(s)))


def tuple_mul(G: FiniteGroup, g: GTuple, h: GTuple) -> GTuple:
    return tuple(G.mul(a, b) for a, b in zip(g, h))


def tuple_inv(G: FiniteGroup, g: GTuple) -> GTuple:
    return tuple(G.inv(a) for a in g)


def identity_tuple(n: int) -> GTuple:
    return (0,) * n


def basis_tuple(n: int, i: int, a: int) -> GTuple:
    """The tuple a[i]: entry a at 1-based position i, identity elsewhere."""
    g = [0] * n
    g[i - 1] = a
    return tuple(g)


def d_vector(n: int, G: FiniteGroup, i: int, j: int, a: int) -> GTuple:
    """The tuple with a at position i and a^-1 at position j (1-based)."""
    if i == j:
        raise ValueError("d_vector needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"index out of range for n={n}")
    g = [0] * n
    g[i - 1] = a
    g[j - 1] = G.inv(a)
    return tuple(g)


class WreathElement(NamedTuple):
    vector: GTuple
    perm: Perm


class WreathGroup:
    """Arithmetic for G wr S_n = G^n x| S_n under the package conventions."""

    def __init__(self, n: int, G: FiniteGroup) -> None:
        self.n = n
        self.G = G

    @property
    def order(self) -> int:
        import math

        return self.G.order ** self.n * math.factorial(self.n)

    def identity(self) -> WreathElement:
        return WreathElement(identity_tuple(self.n), perm_identity(self.n))

    def mul(self, x: WreathElement, y: WreathElement) -> WreathElement:
        if len(x.vector) != len(y.vector):
            raise ValueError("degree mismatch")
        return WreathElement(
            tuple_mul(self.G, x.vector, act(x.perm, y.vector)),
            perm_mul(x.perm, y.perm),
        )

    def inv(self, x: WreathElement) -> WreathElement:
        ip = perm_inv(x.perm)
        return WreathElement(act(ip, tuple_inv(self.G, x.vector)), ip)

    def conj(self, x: WreathElement, y: WreathElement) -> WreathElement:
        return self.mul(self.mul(self.inv(y), x), y)

    def section(self, s: Perm) -> WreathElement:
        return WreathElement(identity_tuple(self.n), s)

    def vector_elem(self, g: GTuple) -> WreathElement:
        return WreathElement(g, perm_identity(self.n))

    def generators(self) -> list[WreathElement]:
        """Vector generators x[i] (x != e) plus adjacent transpositions."""
        out = [self.vector_elem(basis_tuple(self.n, i, a))
               for i in range(1, self.n + 1) for a in range(1, self.G.order)]
        out += [self.section(transposition(self.n, i, i + 1)) for i in range(1, self.n)]
        return out


def wreath_multiply(n: int, G: FiniteGroup, x: WreathElement, y: WreathElement) -> WreathElement:
    """Group law of G wr S_n; see the module docstring for the convention."""
    if len(x.vector) != n or len(y.vector) != n or len(x.perm) != n or len(y.perm) != n:
        raise ValueError("degree mismatch")
    return WreathGroup(n, G).mul(x, y)


# ---------------------------------------------------------------------------
# closures and abelian structure


def subgroup_closure(generators: Iterable, mul: Callable, identity) -> list:
    """BFS closure of a generator set under the group law, identity first.

    Deterministic: elements appear in first-reached order with generators
    applied in the given order (right multiplication).
    """
    gens = list(generators)
    seen = {identity: None}
    queue = [identity]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen[y] = None
                queue.append(y)
    return queue


def commutator_subgroup(G: FiniteGroup) -> list[int]:
    """Element list of [G, G], computed by closing the set of commutators."""
    comms = sorted({G.comm(x, y) for x in G.elements() for y in G.elements()})
    return subgroup_closure(comms, G.mul, 0)


def abelianization(G: FiniteGroup) -> AbelianInvariants:
    """Invariant factors of G/[G,G]."""
    der = set(commutator_subgroup(G))
    # cosets of the derived subgroup, represented by their minimal element
    rep = {}
    for x in G.elements():
        coset = frozenset(G.mul(x, d) for d in der)
        rep.setdefault(coset, min(coset))
    reps = sorted(rep.values())
    lookup = {}
    for coset, r in rep.items():
        for x in coset:
            lookup[x] = r

    def qmul(a: int, b: int) -> int:
        return lookup[G.mul(a, b)]

    return invariants_from_abelian_group(reps, qmul, lookup[0])


def abelian_invariants_of_subgroup(elements: Sequence, mul: Callable, identity) -> AbelianInvariants:
    """Invariant factors of a subset that must be a finite abelian group."""
    elems = list(elements)
    if identity not in elems:
        raise ValueError("identity missing: not a subgroup")
    eset = set(elems)
    for x in elems:
        for y in elems:
            if mul(x, y) not in eset:
                raise ValueError("set is not closed under the law")
    for i, x in enumerate(elems):
        for y in elems[i + 1:]:
            if mul(x, y) != mul(y, x):
                raise ValueError("subgroup is not abelian")
    return invariants_from_abelian_group(elems, mul, identity)
