"""Group rings with exact coefficients, their traces, and Hattori-Stallings ranks.

Everything here is written against a small "computable group" interface:
``identity``, ``mul``, ``inv`` and ``same_class(a, b)``, where ``same_class``
may answer ``None`` when conjugacy is not decided. A ``FiniteGroup`` also
exposes ``class_key`` which makes class sums a single pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Protocol

from .groups import ConjugacyPartition, FiniteGroup, Subgroup


class ComputableGroup(Protocol):
    identity: Hashable

    def mul(self, a, b): ...

    def inv(self, a): ...

    def same_class(self, a, b) -> bool | None: ...


class GroupMismatch(ValueError):
    pass


class NotIdempotent(ValueError):
    pass


class UndecidedConjugacy(Exception):
    """Raised when class sums cannot be formed because conjugacy is unknown."""

    def __init__(self, a, b):
        self.pair = (a, b)
        super().__init__(f"conjugacy of {a!r} and {b!r} is undecided")


def _prune(coeffs: Mapping) -> dict:
    return {g: c for g, c in coeffs.items() if c}


class GroupRingElement:
    """A finitely supported function group -> exact scalars."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group, coeffs: Mapping | None = None):
        self.group = group
        self.coeffs = _prune(coeffs or {})

    @classmethod
    def basis(cls, group, g, coeff=1) -> "GroupRingElement":
        return cls(group, {g: Fraction(coeff)})

    @classmethod
    def one(cls, group) -> "GroupRingElement":
        return cls.basis(group, group.identity)

    @classmethod
    def zero(cls, group) -> "GroupRingElement":
        return cls(group)

    @classmethod
    def averaging(cls, group: FiniteGroup, subgroup: Subgroup | None = None) -> "GroupRingElement":
        """e_H = |H|^-1 * sum of h over H (H = whole group by default)."""
        members = group.elements() if subgroup is None else subgroup.members
        c = Fraction(1, len(members))
        return cls(group, {h: c for h in members})

    def _check(self, other: "GroupRingElement") -> None:
        if other.group is not self.group:
            raise GroupMismatch("group ring elements over different groups")

    def __add__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return ring_add(self, other)

    def __neg__(self):
        return GroupRingElement(self.group, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return ring_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            return ring_mul(self, other)
        return GroupRingElement(self.group, {g: c * other for g, c in self.coeffs.items()})

    def __rmul__(self, scalar):
        return GroupRingElement(self.group, {g: scalar * c for g, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return other.group is self.group and self.coeffs == other.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*[{g}]" for g, c in sorted(self.coeffs.items(), key=lambda kv: repr(kv[0])))

    def support(self) -> list:
        return list(self.coeffs)


def ring_add(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    a._check(b)
    out = dict(a.coeffs)
    for g, c in b.coeffs.items():
        out[g] = out.get(g, 0) + c
    return GroupRingElement(a.group, out)


def ring_mul(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    a._check(b)
    mul = a.group.mul
    out: dict = {}
    for g, x in a.coeffs.items():
        for h, y in b.coeffs.items():
            k = mul(g, h)
            out[k] = out.get(k, 0) + x * y
    return GroupRingElement(a.group, out)


# -- traces ---------------------------------------------------------------------


def kaplansky(a: GroupRingElement):
    return a.coeffs.get(a.group.identity, Fraction(0))


def augmentation(a: GroupRingElement):
    return sum(a.coeffs.values(), Fraction(0))


@dataclass(frozen=True)
class ClassVector:
    """Finitely supported function on conjugacy classes.

    Keys are class ids when ``partition`` is set; otherwise they are
    representative elements (the first support element met in each class).
    """

    values: Mapping
    partition: ConjugacyPartition | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _prune(self.values))

    def __getitem__(self, key):
        return self.values.get(key, Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassVector):
            return NotImplemented
        return dict(self.values) == dict(other.values)

    def __add__(self, other: "ClassVector") -> "ClassVector":
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, 0) + v
        return ClassVector(out, self.partition or other.partition)

    def total(self):
        return sum(self.values.values(), Fraction(0))

    def support(self) -> list:
        return list(self.values)


def hs(a: GroupRingElement) -> ClassVector:
    """Hattori-Stallings trace: class-wise sums of coefficients."""
    G = a.group
    if isinstance(G, FiniteGroup):
        cls = G.partition.class_of
        out: dict = {}
        for g, c in a.coeffs.items():
            k = cls[g]
            out[k] = out.get(k, 0) + c
        return ClassVector(out, G.partition)
    # generic group: group the support pairwise
    reps: list = []
    out = {}
    for g, c in a.coeffs.items():
        for r in reps:
            same = G.same_class(r, g)
            if same is None:
                raise UndecidedConjugacy(r, g)
            if same:
                out[r] = out[r] + c
                break
        else:
            reps.append(g)
            out[g] = c
    return ClassVector(out)


def pushforward(v: ClassVector, sub: Subgroup) -> ClassVector:
    """Push a class vector on ``sub.as_group`` to classes of ``sub.parent``."""
    H = sub.as_group
    G = sub.parent
    out: dict = {}
    for k, c in v.values.items():
        rep = H.partition.classes[k][0]
        gk = G.class_key(sub.members[rep])
        out[gk] = out.get(gk, 0) + c
    return ClassVector(out, G.partition)


# -- matrices -------------------------------------------------------------------


class GroupRingMatrix:
    """Dense square matrix over a group ring."""

    __slots__ = ("group", "entries")

    def __init__(self, group, entries: Iterable[Iterable[GroupRingElement]]):
        rows = tuple(tuple(r) for r in entries)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise ValueError("group ring matrix must be square")
            for e in r:
                if e.group is not group:
                    raise GroupMismatch("matrix entries over different groups")
        self.group = group
        self.entries = rows

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, group, n: int) -> "GroupRingMatrix":
        one, zero = GroupRingElement.one(group), GroupRingElement.zero(group)
        return cls(group, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, group, n: int) -> "GroupRingMatrix":
        zero = GroupRingElement.zero(group)
        return cls(group, [[zero] * n for _ in range(n)])

    @classmethod
    def diagonal(cls, group, diag: list[GroupRingElement]) -> "GroupRingMatrix":
        zero = GroupRingElement.zero(group)
        n = len(diag)
        return cls(group, [[diag[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def elementary(cls, group, n: int, i: int, j: int, r: GroupRingElement) -> "GroupRingMatrix":
        """Identity plus r in position (i, j), i != j; its inverse uses -r."""
        if i == j:
            raise ValueError("elementary matrix needs i != j")
        rows = [list(row) for row in cls.identity(group, n).entries]
        rows[i][j] = r
        return cls(group, rows)

    def __matmul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        if other.group is not self.group or other.n != self.n:
            raise GroupMismatch("incompatible group ring matrices")
        n = self.n
        zero = GroupRingElement.zero(self.group)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return GroupRingMatrix(self.group, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingMatrix):
            return NotImplemented
        return self.group is other.group and self.entries == other.entries

    def trace(self) -> GroupRingElement:
        acc = GroupRingElement.zero(self.group)
        for i in range(self.n):
            acc = acc + self.entries[i][i]
        return acc

    def map_entries(self, f) -> list[list]:
        return [[f(e) for e in row] for row in self.entries]


def is_idempotent(M: GroupRingMatrix) -> bool:
    return M @ M == M


def hs_rank(M: GroupRingMatrix) -> ClassVector:
    if not is_idempotent(M):
        raise NotIdempotent("hs_rank needs an idempotent matrix")
    return hs(M.trace())


def bass_support_check(M: GroupRingMatrix, order_of=None) -> bool | str:
    """True iff the HS rank of M lives on classes of finite-order elements.

    ``order_of(class_key)`` returns a positive int for finite order, ``math.inf``
    for a certified infinite order, or ``None`` when unknown. For a finite
    group it defaults to the class order labels. Returns ``"unknown"`` when
    the support contains a class of undetermined order or class sums
    themselves are undecided.
    """
    try:
        rank = hs_rank(M)
    except UndecidedConjugacy:
        return "unknown"
    if order_of is None:
        G = M.group
        if not isinstance(G, FiniteGroup):
            raise TypeError("order_of is required for groups without a class partition")
        order_of = lambda k: G.partition.class_orders[k]  # noqa: E731
    unknown = False
    for key in rank.support():
        n = order_of(key)
        if n is None:
            unknown = True
        elif n == float("inf"):
            return False
    return "unknown" if unknown else True
