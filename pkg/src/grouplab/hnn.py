"""The one-level binate construction A1(H) as an HNN extension of H x H.

For each abelian subgroup F of a finite group H, with centralizer C, one
stable letter t is adjoined to the base H x H. Writing elements of the base
as pairs, the associated subgroups are

    A = {(f^-1, f k)} = {(a, b) : a in F, a b in C}
    B = {(k, f k)}    = {(a, b) : a in C, b a^-1 in F}

and t x t^-1 = psi(x) for x in A, where psi(a, b) = (a b, b) and
psi^-1(a, b) = (a b^-1, b). That orientation makes the defining relation
(k, f k) = t (f^-1, f k) t^-1 hold.

Words are flat tuples ``(g0, s1, g1, ..., sm, gm)``: base elements at even
positions, signed stable letters at odd positions encoded as ``2*i`` for
t_i and ``2*i + 1`` for t_i^-1. Canonical words are Britton-reduced and each
interior base element g_j (j < m) is the least index in its coset
g_j * S, where S is the subgroup that passes through the following letter
(B for t, A for t^-1). Two words are equal in A1(H) iff their canonical
forms coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

from .groups import (
    DEFAULT_CLOSURE_CAP,
    DEFAULT_SUBGROUP_CAP,
    CapExceeded,
    DirectSquare,
    FiniteGroup,
    GroupError,
    Subgroup,
    abelian_subgroups,
    direct_square,
    prime_factors,
)

DEFAULT_BALL_CAP = 2_000_000

Word = tuple  # flat alternating tuple, see module docstring


class PresentationError(RuntimeError):
    """A built presentation failed its own verification (an internal bug)."""


class MalformedWord(ValueError):
    pass


def letter_code(i: int, e: int) -> int:
    return 2 * i + (0 if e > 0 else 1)


def decode_letter(code: int) -> tuple[int, int]:
    return code >> 1, (-1 if code & 1 else 1)


@dataclass(frozen=True, eq=False)
class StableLetter:
    index: int
    F: Subgroup
    C: Subgroup
    A: frozenset
    B: frozenset
    psi: dict
    psi_inv: dict


@dataclass(frozen=True, eq=False)
class HnnPresentation:
    sq: DirectSquare
    letters: tuple[StableLetter, ...]

    @property
    def source(self) -> FiniteGroup:
        return self.sq.source

    @property
    def base(self) -> FiniteGroup:
        return self.sq.group

    @cached_property
    def _coset_tables(self) -> tuple:
        """Per letter code: (rep, part) with g = rep[g] * part[g], part in S."""
        G = self.base
        out = []
        for L in self.letters:
            for S in (L.B, L.A):  # code 2i: t (push B through), 2i+1: t^-1 (push A)
                rep = [0] * G.order
                part = [0] * G.order
                for g in G.elements():
                    r = min(G.mul(g, s) for s in S)
                    rep[g] = r
                    part[g] = G.mul(G.inv(r), g)
                out.append((tuple(rep), tuple(part)))
        return tuple(out)

    @cached_property
    def _push(self) -> tuple:
        """Per letter code: map s -> s' with s * t^e = t^e * s'."""
        out = []
        for L in self.letters:
            out.append(L.psi_inv)  # b t = t psi^-1(b), b in B
            out.append(L.psi)  # a t^-1 = t^-1 psi(a), a in A
        return tuple(out)

    @cached_property
    def _pinch(self) -> tuple:
        """Per code of the *first* letter of a pinch: (subgroup, map)."""
        out = []
        for L in self.letters:
            out.append((L.A, L.psi))  # t a t^-1 = psi(a)
            out.append((L.B, L.psi_inv))  # t^-1 b t = psi^-1(b)
        return tuple(out)

    def identity_word(self) -> Word:
        return (0,)


@dataclass(frozen=True)
class HnnWord:
    """Alternating word b0 t^e1 b1 ... t^em bm with flags."""

    syllables: Word
    reduced: bool = False
    canonical: bool = False

    @property
    def length(self) -> int:
        """Number of stable letters."""
        return len(self.syllables) // 2

    @property
    def bases(self) -> tuple:
        return self.syllables[0::2]

    @property
    def letters(self) -> list[tuple[int, int]]:
        return [decode_letter(c) for c in self.syllables[1::2]]

    def is_identity(self) -> bool:
        return self.syllables == (0,)

    def tokens(self) -> list[str]:
        return serialize_word(self.syllables)


@dataclass(frozen=True)
class BoundedAnswer:
    status: str  # "yes" | "no" | "unknown"
    witness: object = None
    bound: object = None

    @classmethod
    def yes(cls, witness) -> "BoundedAnswer":
        return cls("yes", witness)

    @classmethod
    def no(cls, certificate) -> "BoundedAnswer":
        return cls("no", certificate)

    @classmethod
    def unknown(cls, bound) -> "BoundedAnswer":
        return cls("unknown", bound=bound)

    def __bool__(self) -> bool:
        raise TypeError("BoundedAnswer has three states; test .status")


# -- construction ----------------------------------------------------------------


def build_a1(
    H: FiniteGroup,
    cap: int = DEFAULT_CLOSURE_CAP,
    subgroup_cap: int = DEFAULT_SUBGROUP_CAP,
    verify: bool = True,
) -> HnnPresentation:
    sq = direct_square(H, cap=cap)
    G = sq.group
    letters = []
    for i, (F, C) in enumerate(abelian_subgroups(H, cap=subgroup_cap)):
        A = frozenset(sq.pair(a, b) for a in F for b in H.elements() if H.mul(a, b) in C)
        B = frozenset(
            sq.pair(a, b) for a in C for b in H.elements() if H.mul(b, H.inv(a)) in F
        )
        psi = {}
        for g in A:
            a, b = sq.split(g)
            psi[g] = sq.pair(H.mul(a, b), b)
        psi_inv = {}
        for g in B:
            a, b = sq.split(g)
            psi_inv[g] = sq.pair(H.mul(a, H.inv(b)), b)
        letters.append(StableLetter(i, F, C, A, B, psi, psi_inv))
    pres = HnnPresentation(sq, tuple(letters))
    if verify:
        problems = verify_isomorphisms(pres)
        if problems:
            raise PresentationError(f"associated subgroup maps are broken: {problems[0]}")
        # the closed forms must agree with the parametrized description
        for L in pres.letters:
            for f in L.F:
                for k in L.C:
                    fk = H.mul(f, k)
                    src, dst = sq.pair(H.inv(f), fk), sq.pair(k, fk)
                    if src not in L.A or dst not in L.B or L.psi[src] != dst:
                        raise PresentationError(
                            f"letter {L.index}: (f, k) = ({f}, {k}) breaks the parametrization"
                        )
            if len(L.A) != L.F.order * L.C.order:
                raise PresentationError(f"letter {L.index}: |A| != |F||C|")
    return pres


def verify_isomorphisms(pres: HnnPresentation) -> list[dict]:
    """Exhaustively check each psi is a bijective homomorphism A -> B."""
    G = pres.base
    problems = []
    for L in pres.letters:
        if set(L.psi) != set(L.A) or set(L.psi.values()) != set(L.B) or len(L.A) != len(L.B):
            problems.append({"letter": L.index, "reason": "psi is not a bijection A -> B"})
            continue
        if any(L.psi_inv[L.psi[a]] != a for a in L.A):
            problems.append({"letter": L.index, "reason": "psi_inv is not inverse to psi"})
            continue
        for x in L.A:
            for y in L.A:
                xy = G.mul(x, y)
                if xy not in L.A:
                    problems.append({"letter": L.index, "reason": "A not closed", "pair": [x, y]})
                    break
                if L.psi[xy] != G.mul(L.psi[x], L.psi[y]):
                    problems.append({"letter": L.index, "reason": "psi not multiplicative", "pair": [x, y]})
                    break
            else:
                continue
            break
    return problems


def relation_failures(pres: HnnPresentation) -> list[dict]:
    """(k, fk)^-1 t (f^-1, fk) t^-1 must reduce to the identity for all f, k."""
    sq, H = pres.sq, pres.source
    bad = []
    for L in pres.letters:
        t, ti = letter_code(L.index, 1), letter_code(L.index, -1)
        for f in L.F:
            for k in L.C:
                fk = H.mul(f, k)
                lhs = sq.pair(k, fk)
                w = (pres.base.inv(lhs), t, sq.pair(H.inv(f), fk), ti, 0)
                red = britton_reduce(pres, w)
                if red.syllables != (0,):
                    bad.append({"letter": L.index, "f": f, "k": k, "word": serialize_word(w),
                                "reduced": red.tokens()})
    return bad


# -- words -----------------------------------------------------------------------


def parse_word(pres: HnnPresentation, tokens: Sequence[str]) -> Word:
    """["b:12", "t:3:+1", "b:7"] -> flat syllable tuple (adjacent bases merged)."""
    G = pres.base
    out = [0]
    for tok in tokens:
        parts = tok.split(":")
        try:
            if parts[0] == "b" and len(parts) == 2:
                g = int(parts[1])
                if not 0 <= g < G.order:
                    raise MalformedWord(f"base index out of range in {tok!r}")
                out[-1] = G.mul(out[-1], g)
            elif parts[0] == "t" and len(parts) == 3:
                i, e = int(parts[1]), int(parts[2])
                if not 0 <= i < len(pres.letters) or e not in (1, -1):
                    raise MalformedWord(f"bad stable letter {tok!r}")
                out += [letter_code(i, e), 0]
            else:
                raise MalformedWord(f"bad token {tok!r}")
        except ValueError as exc:
            if isinstance(exc, MalformedWord):
                raise
            raise MalformedWord(f"bad token {tok!r}") from None
    return tuple(out)


def serialize_word(w: Word) -> list[str]:
    out = []
    for pos, x in enumerate(w):
        if pos % 2:
            i, e = decode_letter(x)
            out.append(f"t:{i}:{'+1' if e > 0 else '-1'}")
        elif x != 0 or len(w) == 1:
            out.append(f"b:{x}")
    return out


def _syllables(w) -> Word:
    if isinstance(w, HnnWord):
        return w.syllables
    w = tuple(w)
    if len(w) % 2 == 0:
        raise MalformedWord("a word has an odd number of syllables (base, letter, ..., base)")
    return w


def _check_word(pres: HnnPresentation, w: Word) -> None:
    n, k = pres.base.order, 2 * len(pres.letters)
    for pos, x in enumerate(w):
        if not isinstance(x, int) or x < 0 or x >= (k if pos % 2 else n):
            raise MalformedWord(f"syllable {pos} = {x!r} is out of range")


def britton_reduce(pres: HnnPresentation, w) -> HnnWord:
    """Remove every pinch t a t^-1 (a in A) and t^-1 b t (b in B)."""
    w = _syllables(w)
    _check_word(pres, w)
    mul = pres.base.mul
    pinch = pres._pinch
    out = [w[0]]
    for pos in range(1, len(w), 2):
        code = w[pos]
        if len(out) > 1 and out[-2] == code ^ 1:
            S, f = pinch[out[-2]]
            b = out[-1]
            if b in S:
                del out[-2:]
                out[-1] = mul(mul(out[-1], f[b]), w[pos + 1])
                continue
        out.append(code)
        out.append(w[pos + 1])
    return HnnWord(tuple(out), reduced=True)


def pinch_sites(pres: HnnPresentation, w: Word) -> list[int]:
    """Positions p of letters such that w[p] w[p+1] w[p+2] is a pinch."""
    sites = []
    for p in range(1, len(w) - 2, 2):
        if w[p + 2] == w[p] ^ 1:
            S, _ = pres._pinch[w[p]]
            if w[p + 1] in S:
                sites.append(p)
    return sites


def apply_pinch(pres: HnnPresentation, w: Word, p: int) -> Word:
    S, f = pres._pinch[w[p]]
    if w[p + 2] != w[p] ^ 1 or w[p + 1] not in S:
        raise ValueError(f"no pinch at position {p}")
    mul = pres.base.mul
    merged = mul(mul(w[p - 1], f[w[p + 1]]), w[p + 3])
    return w[: p - 1] + (merged,) + w[p + 4 :]


def _canonical_pass(pres: HnnPresentation, w: list) -> Word:
    mul = pres.base.mul
    tables = pres._coset_tables
    push = pres._push
    for pos in range(0, len(w) - 1, 2):
        code = w[pos + 1]
        rep, part = tables[code]
        g = w[pos]
        s = part[g]
        if s:
            w[pos] = rep[g]
            w[pos + 2] = mul(push[code][s], w[pos + 2])
    return tuple(w)


def canonicalize(pres: HnnPresentation, w) -> HnnWord:
    red = britton_reduce(pres, w)
    return HnnWord(_canonical_pass(pres, list(red.syllables)), reduced=True, canonical=True)


def multiply(pres: HnnPresentation, u, v) -> HnnWord:
    u, v = _syllables(u), _syllables(v)
    joined = u[:-1] + (pres.base.mul(u[-1], v[0]),) + v[1:]
    return canonicalize(pres, joined)


def inverse(pres: HnnPresentation, w) -> HnnWord:
    w = _syllables(w)
    inv = pres.base.inv
    out = tuple(x ^ 1 if pos % 2 else inv(x) for pos, x in enumerate(reversed(w)))
    return canonicalize(pres, out)


def conjugate(pres: HnnPresentation, x, w) -> HnnWord:
    """x w x^-1"""
    return multiply(pres, multiply(pres, x, w), inverse(pres, x))


def commutator(pres: HnnPresentation, u, v) -> HnnWord:
    """u v u^-1 v^-1"""
    return multiply(pres, conjugate(pres, u, v), inverse(pres, v))


def power(pres: HnnPresentation, w, n: int) -> HnnWord:
    acc = HnnWord((0,), True, True)
    base = canonicalize(pres, w) if n >= 0 else inverse(pres, w)
    for _ in range(abs(n)):
        acc = multiply(pres, acc, base)
    return acc


def _right_mul_generator(pres: HnnPresentation, w: Word, gen: tuple[str, int]) -> Word:
    """Canonical w times one generator, in O(1) syllable work."""
    kind, x = gen
    mul = pres.base.mul
    if kind == "b":
        return w[:-1] + (mul(w[-1], x),)
    code = x
    if len(w) > 1 and w[-2] == code ^ 1:
        S, f = pres._pinch[w[-2]]
        if w[-1] in S:
            return w[:-3] + (mul(w[-3], f[w[-1]]),)
    rep, part = pres._coset_tables[code]
    g = w[-1]
    return w[:-1] + (rep[g], code, pres._push[code][part[g]])


def embed(pres: HnnPresentation, h: int) -> HnnWord:
    """h -> (h, 1) in the base."""
    return HnnWord((pres.sq.left(h),), True, True)


def base_word(g: int) -> HnnWord:
    return HnnWord((g,), True, True)


def stable_word(i: int, e: int = 1) -> HnnWord:
    return HnnWord((0, letter_code(i, e), 0), True, True)


def words_equal(pres: HnnPresentation, u, v) -> bool:
    return canonicalize(pres, u).syllables == canonicalize(pres, v).syllables


# -- checks ----------------------------------------------------------------------


def verify_binate(pres: HnnPresentation, i: int, h: int) -> bool:
    """[t_i, (1, h)] == (h, 1) for h in C_i."""
    L = pres.letters[i]
    if h not in L.C:
        raise ValueError(f"{h} is not in the centralizer attached to letter {i}")
    lhs = commutator(pres, stable_word(i), base_word(pres.sq.right(h)))
    return lhs.syllables == embed(pres, h).syllables


def exponent_vector(pres: HnnPresentation, w) -> tuple[int, ...]:
    """Exponent sum of each stable letter (a conjugacy invariant)."""
    vec = [0] * len(pres.letters)
    for code in _syllables(w)[1::2]:
        i, e = decode_letter(code)
        vec[i] += e
    return tuple(vec)


def bounded_order(pres: HnnPresentation, w, n_max: int) -> BoundedAnswer:
    """Least n <= n_max with w^n = 1, else unknown (never a claim of infinity)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    w = canonicalize(pres, w)
    acc = w
    for n in range(1, n_max + 1):
        if acc.syllables == (0,):
            return BoundedAnswer.yes(n)
        acc = multiply(pres, acc, w)
    return BoundedAnswer.unknown(n_max)


def ball_generators(pres: HnnPresentation) -> list[tuple[str, int]]:
    gens = [("b", g) for g in range(1, pres.base.order)]
    for L in pres.letters:
        gens += [("t", letter_code(L.index, 1)), ("t", letter_code(L.index, -1))]
    return gens


def ball_size_bound(pres: HnnPresentation, radius: int) -> int:
    k = pres.base.order - 1 + 2 * len(pres.letters)
    return sum(k**r for r in range(radius + 1))


def ball(pres: HnnPresentation, radius: int, cap: int = DEFAULT_BALL_CAP) -> list[Word]:
    """Canonical forms of all words with at most ``radius`` letters.

    Every letter (a non-identity base element or a stable letter t_i^+-1)
    has length 1. Returned in breadth-first discovery order.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    bound = ball_size_bound(pres, radius)
    if bound > cap:
        raise CapExceeded(f"ball of radius {radius}", cap, bound)
    gens = ball_generators(pres)
    seen = {(0,): None}
    frontier = [(0,)]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for gen in gens:
                v = _right_mul_generator(pres, w, gen)
                if v not in seen:
                    seen[v] = None
                    nxt.append(v)
        frontier = nxt
    return list(seen)


def conjugacy_search(
    pres: HnnPresentation,
    w1,
    w2,
    radius: int,
    n_max: int = 24,
    ball_words: Sequence[Word] | None = None,
) -> BoundedAnswer:
    """Look for x in the ball with x w1 x^-1 = w2.

    "no" is only returned with a certificate: distinct stable-letter exponent
    vectors, or provably different orders.
    """
    c1, c2 = canonicalize(pres, w1), canonicalize(pres, w2)
    e1, e2 = exponent_vector(pres, c1), exponent_vector(pres, c2)
    if e1 != e2:
        return BoundedAnswer.no({"invariant": "exponent_vector", "values": [list(e1), list(e2)]})
    o1, o2 = bounded_order(pres, c1, n_max), bounded_order(pres, c2, n_max)
    if "yes" in (o1.status, o2.status) and (o1.status, o1.witness) != (o2.status, o2.witness):
        return BoundedAnswer.no(
            {"invariant": "order", "values": [o1.witness if o1.status == "yes" else f">{n_max}",
                                              o2.witness if o2.status == "yes" else f">{n_max}"]}
        )
    if ball_words is None:
        ball_words = ball(pres, radius)
    target = c2.syllables
    for x in ball_words:
        if conjugate(pres, x, c1).syllables == target:
            return BoundedAnswer.yes(serialize_word(x))
    return BoundedAnswer.unknown(radius)


def prime_power_parts(m: int) -> set[int]:
    """Maximal prime powers p^k exactly dividing m."""
    out = set()
    for p in prime_factors(m):
        q = p
        while m % (q * p) == 0:
            q *= p
        out.add(q)
    return out


def torsion_survey(
    pres: HnnPresentation,
    radius: int,
    n_max: int,
    ball_words: Sequence[Word] | None = None,
) -> set[int]:
    if ball_words is None:
        ball_words = ball(pres, radius)
    found = set()
    for w in ball_words:
        if w == (0,):
            continue
        ans = bounded_order(pres, HnnWord(w, True, True), n_max)
        if ans.status == "yes":
            found |= prime_power_parts(ans.witness)
    return found


def element_prime_powers(H: FiniteGroup) -> set[int]:
    out = set()
    for n in H.orders:
        out |= prime_power_parts(n)
    return out


# -- the group interface for group-ring traces ----------------------------------


class A1Group:
    """A1(H) as a computable group on canonical syllable tuples.

    ``same_class`` is decided by a bounded conjugator search, so it may
    answer None.
    """

    identity = (0,)

    def __init__(self, pres: HnnPresentation, radius: int = 1, n_max: int = 24):
        self.pres = pres
        self.radius = radius
        self.n_max = n_max
        self._ball = None

    def element(self, w) -> Word:
        return canonicalize(self.pres, w).syllables

    def mul(self, a, b) -> Word:
        return multiply(self.pres, a, b).syllables

    def inv(self, a) -> Word:
        return inverse(self.pres, a).syllables

    def same_class(self, a, b) -> bool | None:
        if self._ball is None:
            self._ball = ball(self.pres, self.radius)
        ans = conjugacy_search(self.pres, a, b, self.radius, self.n_max, self._ball)
        return {"yes": True, "no": False}.get(ans.status)

    def order_of(self, w) -> int | None:
        ans = bounded_order(self.pres, w, self.n_max)
        return ans.witness if ans.status == "yes" else None


def sabotage_psi(pres: HnnPresentation, letter: int | None = None) -> HnnPresentation:
    """Test hook: a copy whose psi for one letter is composed with a swap.

    Picks the first letter with |A| > 1 unless told otherwise; the result
    skips build-time verification so downstream checks must catch it.
    """
    if letter is None:
        letter = next((L.index for L in pres.letters if len(L.A) > 1), None)
        if letter is None:
            raise ValueError("no letter with a non-trivial associated subgroup")
    L = pres.letters[letter]
    keys = sorted(L.psi)
    a, b = keys[0], keys[1]
    psi = dict(L.psi)
    psi[a], psi[b] = L.psi[b], L.psi[a]
    psi_inv = {v: k for k, v in psi.items()}
    letters = list(pres.letters)
    letters[letter] = replace(L, psi=psi, psi_inv=psi_inv)
    return HnnPresentation(pres.sq, tuple(letters))
