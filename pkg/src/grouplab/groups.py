"""Finite groups as multiplication tables.

Every group is stored with canonical indexing: element 0 is the identity and
the remaining elements follow breadth-first discovery order from the
generators. All downstream output (class ids, subgroup lists, reports) is
deterministic because of this.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_CLOSURE_CAP = 5040
DEFAULT_SUBGROUP_CAP = 48


class GroupError(ValueError):
    pass


class CapExceeded(GroupError):
    """A configured size cap was hit; nothing was silently truncated."""

    def __init__(self, what: str, cap: int, size: int | None = None):
        self.what = what
        self.cap = cap
        self.size = size
        msg = f"{what}: cap {cap} exceeded"
        if size is not None:
            msg += f" (size {size})"
        super().__init__(msg)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p*q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def _check_perm(p: Sequence[int], degree: int) -> None:
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise GroupError(f"not a permutation of 0..{degree - 1}: {list(p)}")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A group on 0..order-1 given by its Cayley table.

    ``labels`` holds the permutation (or string) behind each index when the
    group came from generators; it is only used for I/O and natural actions.
    """

    table: tuple[tuple[int, ...], ...]
    inverses: tuple[int, ...]
    labels: tuple | None = None
    name: str = ""

    identity = 0

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, g: int, n: int) -> int:
        if n < 0:
            g, n = self.inverses[g], -n
        result = 0
        for _ in range(n):
            result = self.table[result][g]
        return result

    def conj(self, x: int, g: int) -> int:
        """x g x^-1"""
        t = self.table
        return t[t[x][g]][self.inverses[x]]

    @cached_property
    def partition(self) -> "ConjugacyPartition":
        return conjugacy_classes(self)

    def class_key(self, g: int) -> int:
        return self.partition.class_of[g]

    def same_class(self, a: int, b: int) -> bool:
        cls = self.partition.class_of
        return cls[a] == cls[b]

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(element_order(self, g) for g in self.elements())

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.orders)

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements() for b in range(a))

    def as_subgroup(self) -> "Subgroup":
        return Subgroup(self, tuple(self.elements()))

    def verify(self) -> None:
        """Exhaustive associativity, unit and inverse check."""
        n = self.order
        t = self.table
        for a in range(n):
            if t[0][a] != a or t[a][0] != a:
                raise GroupError(f"index 0 is not a two-sided unit at element {a}")
            ai = self.inverses[a]
            if t[a][ai] != 0 or t[ai][a] != 0:
                raise GroupError(f"inverse of {a} is wrong")
        for a in range(n):
            ta = t[a]
            for b in range(n):
                ab = ta[b]
                tab = t[ab]
                tb = t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise GroupError(f"not associative at ({a}, {b}, {c})")


def group_from_generators(
    degree: int,
    perms: Iterable[Sequence[int]],
    cap: int = DEFAULT_CLOSURE_CAP,
    name: str = "",
) -> FiniteGroup:
    """Close a list of permutations under composition.

    Elements are discovered breadth-first from the identity by right
    multiplication with each generator in the given order.
    """
    gens = [tuple(p) for p in perms]
    for p in gens:
        _check_perm(p, degree)
    ident = tuple(range(degree))
    index = {ident: 0}
    elems = [ident]
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = compose(g, s)
            if h not in index:
                if len(elems) >= cap:
                    raise CapExceeded("generator closure", cap)
                index[h] = len(elems)
                elems.append(h)
                queue.append(h)
    n = len(elems)
    table = tuple(tuple(index[compose(a, b)] for b in elems) for a in elems)
    inverses = tuple(row.index(0) for row in table)
    return FiniteGroup(table, inverses, labels=tuple(elems), name=name)


def group_from_table(rows: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Validate a Cayley table and relabel it so the identity is index 0."""
    n = len(rows)
    if n == 0:
        raise GroupError("empty table")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise GroupError(f"table row {i} has length {len(row)}, expected {n}")
        for j, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < n:
                raise GroupError(f"table cell [{i}][{j}] = {v!r} is not an index in 0..{n - 1}")
    ident = None
    for e in range(n):
        if all(rows[e][a] == a and rows[a][e] == a for a in range(n)):
            ident = e
            break
    if ident is None:
        raise GroupError("table has no identity element")
    # swap ident <-> 0
    perm = list(range(n))
    perm[0], perm[ident] = ident, 0
    pos = {old: new for new, old in enumerate(perm)}
    table = tuple(tuple(pos[rows[perm[a]][perm[b]]] for b in range(n)) for a in range(n))
    inverses = []
    for a in range(n):
        try:
            inverses.append(table[a].index(0))
        except ValueError:
            raise GroupError(f"element {perm[a]} has no inverse") from None
    g = FiniteGroup(table, tuple(inverses), name=name)
    g.verify()
    return g


def element_order(G: FiniteGroup, g: int) -> int:
    n, x = 1, g
    while x != 0:
        x = G.table[x][g]
        n += 1
    return n


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return g in self.memberset

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and other.members == self.members
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, members={list(self.members)})"

    @cached_property
    def memberset(self) -> frozenset[int]:
        return frozenset(self.members)

    def is_closed(self) -> bool:
        G = self.parent
        s = self.memberset
        if 0 not in s:
            return False
        return all(G.inv(a) in s for a in s) and all(G.mul(a, b) in s for a in s for b in s)

    def is_abelian(self) -> bool:
        G = self.parent
        return all(G.mul(a, b) == G.mul(b, a) for a in self.members for b in self.members)

    @cached_property
    def as_group(self) -> FiniteGroup:
        """This subgroup as a standalone group; index k is ``members[k]``."""
        G = self.parent
        pos = {g: k for k, g in enumerate(self.members)}
        table = tuple(tuple(pos[G.mul(a, b)] for b in self.members) for a in self.members)
        inverses = tuple(pos[G.inv(a)] for a in self.members)
        labels = None if G.labels is None else tuple(G.labels[g] for g in self.members)
        return FiniteGroup(table, inverses, labels=labels, name=f"{G.name}<{self.order}>")

    @cached_property
    def index_of(self) -> dict[int, int]:
        return {g: k for k, g in enumerate(self.members)}


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = list(gens)
    seen = {0}
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for s in gens:
            b = G.mul(a, s)
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return Subgroup(G, tuple(seen))


@dataclass(frozen=True, eq=False)
class ConjugacyPartition:
    class_of: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    class_orders: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


def conjugacy_classes(G: FiniteGroup) -> ConjugacyPartition:
    class_of = [-1] * G.order
    classes = []
    for g in G.elements():
        if class_of[g] >= 0:
            continue
        orbit = sorted({G.conj(x, g) for x in G.elements()})
        for h in orbit:
            class_of[h] = len(classes)
        classes.append(tuple(orbit))
    orders = tuple(element_order(G, c[0]) for c in classes)
    return ConjugacyPartition(tuple(class_of), tuple(classes), orders)


def centralizer(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    S = list(S)
    t = G.table
    return Subgroup(G, tuple(g for g in G.elements() if all(t[g][s] == t[s][g] for s in S)))


def _sort_key(s: Subgroup):
    return (s.order, s.members)


def cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    found = {}
    for g in G.elements():
        s = generated_subgroup(G, [g])
        found.setdefault(s.members, s)
    return sorted(found.values(), key=_sort_key)


def _join_closure(G: FiniteGroup, abelian_only: bool) -> list[Subgroup]:
    # Every subgroup is a join of cyclic subgroups; grow joins one cyclic
    # subgroup at a time. For abelian_only, only join cyclic subgroups that
    # commute with everything already present.
    cyclic = cyclic_subgroups(G)
    gen_of = {c.members: min(g for g in c.members if generated_subgroup(G, [g]).members == c.members) for c in cyclic}
    found: dict[tuple[int, ...], Subgroup] = {c.members: c for c in cyclic}
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for s in frontier:
            cent = centralizer(G, s.members).memberset if abelian_only else None
            for c in cyclic:
                g = gen_of[c.members]
                if g in s.memberset:
                    continue
                if abelian_only and g not in cent:
                    continue
                t = generated_subgroup(G, [*s.members, g])
                if t.members not in found:
                    found[t.members] = t
                    nxt.append(t)
        frontier = nxt
    return sorted(found.values(), key=_sort_key)


def all_subgroups(G: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list[Subgroup]:
    if G.order > cap:
        raise CapExceeded("subgroup enumeration", cap, G.order)
    return _join_closure(G, abelian_only=False)


def abelian_subgroups(
    G: FiniteGroup, cap: int = DEFAULT_SUBGROUP_CAP
) -> list[tuple[Subgroup, Subgroup]]:
    """All abelian subgroups F of G, each paired with its centralizer C_G(F).

    Ordered by size, then by member list.
    """
    if G.order > cap:
        raise CapExceeded("abelian subgroup enumeration", cap, G.order)
    return [(F, centralizer(G, F.members)) for F in _join_closure(G, abelian_only=True)]


# -- direct square -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DirectSquare:
    """H x H with (a, b) stored at index a*|H| + b."""

    source: FiniteGroup
    group: FiniteGroup

    def pair(self, a: int, b: int) -> int:
        return a * self.source.order + b

    def split(self, g: int) -> tuple[int, int]:
        return divmod(g, self.source.order)

    def left(self, h: int) -> int:
        return self.pair(h, 0)

    def right(self, h: int) -> int:
        return self.pair(0, h)

    def diagonal(self, h: int) -> int:
        return self.pair(h, h)

    def antidiagonal(self, f: int) -> int:
        """(f^-1, f)"""
        return self.pair(self.source.inv(f), f)


def direct_square(H: FiniteGroup, cap: int = DEFAULT_CLOSURE_CAP) -> DirectSquare:
    n = H.order
    if n * n > cap:
        raise CapExceeded("direct square", cap, n * n)
    t = H.table
    table = tuple(
        tuple(t[a1][b1] * n + t[a2][b2] for b1 in range(n) for b2 in range(n))
        for a1 in range(n)
        for a2 in range(n)
    )
    inverses = tuple(H.inv(a) * n + H.inv(b) for a in range(n) for b in range(n))
    labels = None
    if H.labels is not None:
        labels = tuple((H.labels[a], H.labels[b]) for a in range(n) for b in range(n))
    sq = DirectSquare(H, FiniteGroup(table, inverses, labels=labels, name=f"{H.name}x{H.name}"))
    for emb in (sq.left, sq.right, sq.diagonal):
        for a in range(n):
            for b in range(n):
                if sq.group.mul(emb(a), emb(b)) != emb(H.mul(a, b)):
                    raise GroupError("direct square embedding is not a homomorphism")
    return sq


# -- Lambda ring ---------------------------------------------------------------


def prime_factors(n: int) -> set[int]:
    n = abs(n)
    out = set()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


@dataclass(frozen=True)
class LambdaRing:
    """Z localized at a finite set of primes."""

    primes: frozenset[int]

    def membership(self, q) -> bool:
        return prime_factors(Fraction(q).denominator) <= self.primes

    __contains__ = membership


def lambda_ring(subgroups: Sequence[Subgroup | FiniteGroup]) -> LambdaRing:
    if not subgroups:
        raise GroupError("lambda_ring needs at least one subgroup")
    primes = set()
    for s in subgroups:
        primes |= prime_factors(s.order)
    return LambdaRing(frozenset(primes))


# -- built-in groups ------------------------------------------------------------


def _cycle(n: int) -> list[int]:
    return [(i + 1) % n for i in range(n)]


BUILTIN_GENERATORS: dict[str, tuple[int, list[list[int]]]] = {
    "C1": (1, []),
    "C2": (2, [_cycle(2)]),
    "C3": (3, [_cycle(3)]),
    "C4": (4, [_cycle(4)]),
    "C6": (6, [_cycle(6)]),
    "S3": (3, [[1, 0, 2], [1, 2, 0]]),
    "D4": (4, [[1, 2, 3, 0], [0, 3, 2, 1]]),
    # left-regular representation on {1, i, j, k, -1, -i, -j, -k}
    "Q8": (8, [[1, 4, 3, 6, 5, 0, 7, 2], [2, 7, 4, 1, 6, 3, 0, 5]]),
    "A4": (4, [[1, 2, 0, 3], [1, 0, 3, 2]]),
}


def builtin_group(name: str, cap: int = DEFAULT_CLOSURE_CAP) -> FiniteGroup:
    try:
        degree, gens = BUILTIN_GENERATORS[name]
    except KeyError:
        raise GroupError(f"unknown built-in group {name!r}") from None
    return group_from_generators(degree, gens, cap=cap, name=name)
