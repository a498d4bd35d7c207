"""Class functions of finite groups with cyclotomic values, induction, and
decomposition into characters induced from cyclic subgroups.

No character tables are computed: characters come from permutation actions,
linear characters of cyclic groups, inductions and integer combinations.
All class functions of a group H live at cyclotomic level exponent(H).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclotomic import Cyclotomic
from .groups import (
    FiniteGroup,
    LambdaRing,
    Subgroup,
    compose,
    cyclic_subgroups,
    element_order,
)
from .lattice import solve_integer


class CharacterError(ValueError):
    pass


class ArtinAlarm(RuntimeError):
    """Decomposition failed for a genuine virtual character."""


@dataclass(frozen=True, eq=False)
class ClassFunction:
    group: FiniteGroup
    values: tuple[Cyclotomic, ...]  # one per conjugacy class, class id order

    def __post_init__(self):
        n = self.group.exponent
        if len(self.values) != len(self.group.partition):
            raise CharacterError("one value per conjugacy class is required")
        object.__setattr__(self, "values", tuple(Cyclotomic.lift(v, n) for v in self.values))

    @classmethod
    def from_function(cls, G: FiniteGroup, f) -> "ClassFunction":
        return cls(G, tuple(f(c[0]) for c in G.partition.classes))

    @classmethod
    def constant(cls, G: FiniteGroup, c=1) -> "ClassFunction":
        return cls(G, tuple(Fraction(c) for _ in G.partition.classes))

    @property
    def partition(self):
        return self.group.partition

    def __call__(self, g: int) -> Cyclotomic:
        return self.values[self.group.class_key(g)]

    def degree(self) -> Cyclotomic:
        return self.values[self.group.class_key(0)]

    def _same(self, other: "ClassFunction") -> None:
        if other.group is not self.group:
            raise CharacterError("class functions on different groups")

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._same(other)
        return ClassFunction(self.group, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        self._same(other)
        return ClassFunction(self.group, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "ClassFunction":
        return ClassFunction(self.group, tuple(-a for a in self.values))

    def __mul__(self, other) -> "ClassFunction":
        if isinstance(other, ClassFunction):
            self._same(other)
            return ClassFunction(self.group, tuple(a * b for a, b in zip(self.values, other.values)))
        return ClassFunction(self.group, tuple(a * other for a in self.values))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return other.group is self.group and self.values == other.values

    def is_integral(self) -> bool:
        return all(v.is_integral() for v in self.values)

    def flatten(self) -> list[Fraction]:
        return [c for v in self.values for c in v.coords]

    def __repr__(self) -> str:
        return f"ClassFunction({self.group.name}, {list(self.values)})"


def inner_product(chi: ClassFunction, psi: ClassFunction):
    chi._same(psi)
    G = chi.group
    total = Cyclotomic.rational(0, G.exponent)
    for cls, a, b in zip(G.partition.classes, chi.values, psi.values):
        total = total + a * b.conjugate() * len(cls)
    return total / G.order


def restrict(chi: ClassFunction, sub: Subgroup) -> ClassFunction:
    if sub.parent is not chi.group:
        raise CharacterError("subgroup of a different group")
    C = sub.as_group
    return ClassFunction.from_function(C, lambda k: chi(sub.members[k]))


def induce(H: FiniteGroup, sub: Subgroup, chi: ClassFunction) -> ClassFunction:
    """(Ind chi)(h) = |C|^-1 * sum over x in H with x^-1 h x in C of chi(x^-1 h x)."""
    if sub.parent is not H or chi.group is not sub.as_group:
        raise CharacterError("induce needs a subgroup of H and a class function on it")
    pos = sub.index_of
    n = H.exponent

    def value(h):
        acc = Cyclotomic.rational(0, n)
        for x in H.elements():
            y = H.conj(H.inv(x), h)
            if y in pos:
                acc = acc + chi(pos[y])
        return acc / sub.order

    return ClassFunction.from_function(H, value)


def permutation_character(G: FiniteGroup, action: Sequence[Sequence[int]]) -> ClassFunction:
    """Fixed-point counts of a permutation action given per element.

    ``action[g]`` is the permutation of g; it must satisfy
    action[g*h] = action[g] o action[h].
    """
    if len(action) != G.order:
        raise CharacterError(f"action lists {len(action)} permutations for a group of order {G.order}")
    acts = [tuple(p) for p in action]
    for a in G.elements():
        for b in G.elements():
            if acts[G.mul(a, b)] != compose(acts[a], acts[b]):
                raise CharacterError(f"action is not a homomorphism at ({a}, {b})")
    return ClassFunction.from_function(G, lambda g: sum(1 for x, y in enumerate(acts[g]) if x == y))


def action_from_generators(G: FiniteGroup, degree: int, images: dict[int, Sequence[int]]) -> list[tuple[int, ...]]:
    """Extend generator images g -> permutation to a per-element action."""
    acts: dict[int, tuple[int, ...]] = {0: tuple(range(degree))}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for s, p in images.items():
                b = G.mul(a, s)
                img = compose(acts[a], tuple(p))
                if b not in acts:
                    acts[b] = img
                    nxt.append(b)
        frontier = nxt
    if len(acts) != G.order:
        raise CharacterError("generator images do not reach every element")
    return [acts[g] for g in G.elements()]


def regular_action(G: FiniteGroup) -> list[tuple[int, ...]]:
    return [tuple(G.mul(g, x) for x in G.elements()) for g in G.elements()]


def natural_action(G: FiniteGroup) -> list[tuple[int, ...]]:
    if G.labels is None or not isinstance(G.labels[0], tuple) or not all(isinstance(x, int) for x in G.labels[0]):
        raise CharacterError("group has no permutation labels")
    return [tuple(p) for p in G.labels]


def trivial_character(G: FiniteGroup) -> ClassFunction:
    return ClassFunction.constant(G, 1)


def regular_character(G: FiniteGroup) -> ClassFunction:
    return ClassFunction.from_function(G, lambda g: G.order if g == 0 else 0)


def cyclic_generator(C: FiniteGroup) -> int:
    for g in C.elements():
        if element_order(C, g) == C.order:
            return g
    raise CharacterError(f"{C!r} is not cyclic")


def linear_characters(C: FiniteGroup) -> list[ClassFunction]:
    """lambda_j(c^m) = zeta_n^(j m) for the least-index generator c."""
    n = C.order
    c = cyclic_generator(C)
    exp_of = {}
    x = 0
    for m in range(n):
        exp_of[x] = m
        x = C.mul(x, c)
    return [
        ClassFunction.from_function(C, lambda g, j=j: Cyclotomic.zeta(n, j * exp_of[g]))
        for j in range(n)
    ]


# -- Artin decomposition ------------------------------------------------------------


@dataclass(frozen=True)
class ArtinTerm:
    subgroup: Subgroup
    j: int
    coeff: Fraction

    def generators(self) -> list[int]:
        C = self.subgroup.as_group
        return [self.subgroup.members[cyclic_generator(C)]]


@dataclass(frozen=True)
class ArtinDecomposition:
    target: ClassFunction
    terms: tuple[ArtinTerm, ...]
    verified: bool
    scale: int


def induced_cyclic_family(H: FiniteGroup) -> list[tuple[Subgroup, int, ClassFunction]]:
    out = []
    for C in cyclic_subgroups(H):
        for j, lam in enumerate(linear_characters(C.as_group)):
            out.append((C, j, induce(H, C, lam)))
    return out


def reexpand(H: FiniteGroup, terms: Sequence[ArtinTerm]) -> ClassFunction:
    acc = ClassFunction.constant(H, 0)
    for t in terms:
        lam = linear_characters(t.subgroup.as_group)[t.j]
        acc = acc + induce(H, t.subgroup, lam) * t.coeff
    return acc


def artin_decompose(H: FiniteGroup, chi: ClassFunction, family=None) -> ArtinDecomposition:
    """Write chi as a Z[1/|H|]-combination of characters induced from cyclic subgroups."""
    if chi.group is not H:
        raise CharacterError("character of a different group")
    if not chi.is_integral():
        raise CharacterError("input is not a virtual character (non-integral values)")
    family = family if family is not None else induced_cyclic_family(H)
    for C, j, ind in family:
        if ind == chi:
            terms = (ArtinTerm(C, j, Fraction(1)),)
            return ArtinDecomposition(chi, terms, reexpand(H, terms) == chi, 1)
    rows = []
    for _, _, ind in family:
        flat = ind.flatten()
        if any(x.denominator != 1 for x in flat):
            raise ArtinAlarm("an induced linear character has non-integral coordinates")
        rows.append([int(x) for x in flat])
    target = chi.flatten()
    for power in (1, 2, 3):
        k = H.order**power
        x = solve_integer(rows, [int(c * k) for c in target])
        if x is None:
            continue
        terms = tuple(
            ArtinTerm(C, j, Fraction(xi, k)) for (C, j, _), xi in zip(family, x) if xi
        )
        return ArtinDecomposition(chi, terms, reexpand(H, terms) == chi, k)
    raise ArtinAlarm(f"no decomposition with denominators up to |H|^3 for {chi!r}")


# -- Kaplansky image -------------------------------------------------------------


def kaplansky_rep(H: FiniteGroup, chi: ClassFunction) -> Fraction:
    """chi(1)/|H|, the Kaplansky trace of the module with character chi."""
    d = chi.degree()
    if not d.is_rational() or d.to_fraction().denominator != 1:
        raise CharacterError(f"degree {d!r} is not a rational integer")
    return d.to_fraction() / H.order


def sigma(entries: Sequence[tuple[FiniteGroup, ClassFunction]], lam: LambdaRing) -> tuple[Fraction, bool]:
    total = sum((kaplansky_rep(H, chi) for H, chi in entries), Fraction(0))
    return total, lam.membership(total)
