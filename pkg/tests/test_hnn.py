import itertools
import math
import random

import pytest

from grouplab.groups import CapExceeded, builtin_group
from grouplab.hnn import (
    A1Group,
    MalformedWord,
    PresentationError,
    ball,
    bounded_order,
    britton_reduce,
    build_a1,
    canonicalize,
    commutator,
    conjugacy_search,
    conjugate,
    element_prime_powers,
    embed,
    exponent_vector,
    inverse,
    letter_code,
    multiply,
    parse_word,
    pinch_sites,
    power,
    relation_failures,
    sabotage_psi,
    serialize_word,
    stable_word,
    torsion_survey,
    verify_binate,
    verify_isomorphisms,
    words_equal,
)


def raw_inverse(pres, w):
    inv = pres.base.inv
    return tuple(x ^ 1 if pos % 2 else inv(x) for pos, x in enumerate(reversed(w)))


def raw_concat(pres, u, v):
    return u[:-1] + (pres.base.mul(u[-1], v[0]),) + v[1:]


def equal_by_britton(pres, u, v):
    """u == v iff u v^-1 Britton-reduces to the identity (independent of coset choices)."""
    return britton_reduce(pres, raw_concat(pres, u, raw_inverse(pres, v))).syllables == (0,)


def random_word(pres, rng, letters=3):
    w = [rng.randrange(pres.base.order)]
    for _ in range(rng.randint(0, letters)):
        w += [rng.randrange(2 * len(pres.letters)), rng.randrange(pres.base.order)]
    return tuple(w)


def test_trivial_group_gives_free_cyclic(a1):
    pres = a1("C1")
    assert pres.base.order == 1
    assert len(pres.letters) == 1
    t = stable_word(0)
    for n in (1, 2, 5):
        assert power(pres, t, n).length == n
    assert bounded_order(pres, t, 30).status == "unknown"


@pytest.mark.parametrize(
    "name, sizes",
    [("C2", [2, 4]), ("S3", [6, 4, 4, 4, 9]), ("C3", [3, 9]), ("C4", [4, 8, 16])],
)
def test_associated_subgroup_orders(a1, name, sizes):
    pres = a1(name)
    assert [len(L.A) for L in pres.letters] == sizes
    for L in pres.letters:
        assert len(L.A) == L.F.order * L.C.order == len(L.B)


@pytest.mark.parametrize("name", ["C2", "C3", "C4", "S3", "Q8"])
def test_build_verifies_everything(a1, name):
    pres = a1(name)
    assert verify_isomorphisms(pres) == []
    assert relation_failures(pres) == []


def test_cap_on_direct_square():
    with pytest.raises(CapExceeded):
        build_a1(builtin_group("A4"), cap=100)


def test_sabotage_is_caught(a1):
    bad = sabotage_psi(a1("S3"))
    assert verify_isomorphisms(bad)
    failures = relation_failures(bad)
    assert failures and {"letter", "f", "k", "word"} <= set(failures[0])


def test_britton_examples(a1):
    pres = a1("S3")
    sq = pres.sq
    for L in pres.letters:
        t, ti = letter_code(L.index, 1), letter_code(L.index, -1)
        for h in L.C:
            assert britton_reduce(pres, (0, t, sq.right(h), ti, 0)).syllables == (sq.diagonal(h),)
        for f in L.F:
            assert britton_reduce(pres, (0, t, sq.left(f), ti, 0)).syllables == (sq.left(f),)
        assert britton_reduce(pres, (0, t, 0, ti, 0)).syllables == (0,)


def test_reduced_words_have_no_pinches(a1):
    pres = a1("S3")
    rng = random.Random(2)
    for _ in range(300):
        w = random_word(pres, rng, 5)
        red = britton_reduce(pres, w)
        assert pinch_sites(pres, red.syllables) == []
        assert equal_by_britton(pres, red.syllables, w)


def test_canonical_form_decides_equality(a1):
    pres = a1("C3")
    rng = random.Random(4)
    words = [random_word(pres, rng, 2) for _ in range(80)]
    for u, v in itertools.combinations(words, 2):
        assert words_equal(pres, u, v) == equal_by_britton(pres, u, v)


def test_canonicalize_examples(a1):
    pres = a1("S3")
    H = pres.source
    for h in H.elements():
        assert canonicalize(pres, embed(pres, h)).syllables == (pres.sq.left(h),)
    for L in pres.letters:
        for h in L.C:
            w = multiply(pres, commutator(pres, stable_word(L.index), (pres.sq.right(h),)), inverse(pres, embed(pres, h)))
            assert w.syllables == (0,)


def test_canonicalize_idempotent_on_ball(a1):
    pres = a1("S3")
    for w in ball(pres, 2):
        assert canonicalize(pres, w).syllables == w


def test_embed_is_injective_homomorphism(a1):
    pres = a1("S3")
    H = pres.source
    images = {embed(pres, h).syllables for h in H.elements()}
    assert len(images) == H.order
    assert embed(pres, 0).syllables == (0,)
    for g in H.elements():
        assert multiply(pres, embed(pres, g), embed(pres, H.inv(g))).syllables == (0,)


def test_group_laws_on_random_words(a1):
    pres = a1("S3")
    rng = random.Random(9)
    for _ in range(100):
        u, v, w = (random_word(pres, rng) for _ in range(3))
        assert multiply(pres, multiply(pres, u, v), w) == multiply(pres, u, multiply(pres, v, w))
        assert multiply(pres, u, inverse(pres, u)).syllables == (0,)


@pytest.mark.parametrize("name", ["C2", "C4", "S3"])
def test_binate_witness(a1, name):
    pres = a1(name)
    for L in pres.letters:
        for h in L.C:
            assert verify_binate(pres, L.index, h)


def test_binate_rejects_h_outside_centralizer(a1):
    pres = a1("S3")
    L = next(L for L in pres.letters if L.C.order < pres.source.order)
    h = next(h for h in pres.source.elements() if h not in L.C)
    with pytest.raises(ValueError):
        verify_binate(pres, L.index, h)


def test_bounded_orders(a1):
    pres = a1("S3")
    sq, H = pres.sq, pres.source
    for a in H.elements():
        for b in H.elements():
            ans = bounded_order(pres, (sq.pair(a, b),), 24)
            assert ans.status == "yes" and ans.witness == math.lcm(H.orders[a], H.orders[b])
    assert bounded_order(pres, stable_word(2), 24).status == "unknown"
    with pytest.raises(ValueError):
        bounded_order(pres, stable_word(0), 0)


def test_ball_sizes(a1):
    pres = a1("C2")
    assert ball(pres, 0) == [(0,)]
    b1 = ball(pres, 1)
    assert len(b1) == pres.base.order + 2 * len(pres.letters)
    assert set(ball(pres, 0)) <= set(b1)
    with pytest.raises(CapExceeded):
        ball(pres, 3, cap=50)


def test_ball_of_a1_c2_matches_pairwise_oracle(a1):
    pres = a1("C2")
    n, k = pres.base.order, 2 * len(pres.letters)
    gens = [(g,) for g in range(1, n)] + [(0, c, 0) for c in range(k)]
    words = [(0,)] + gens + [raw_concat(pres, u, v) for u in gens for v in gens]
    distinct = []
    for w in words:
        if not any(equal_by_britton(pres, w, d) for d in distinct):
            distinct.append(w)
    assert len(ball(pres, 2)) == len(distinct)


def test_conjugacy_search(a1):
    pres = a1("S3")
    H = pres.source
    words = ball(pres, 2)
    reps = [c[0] for c in H.partition.classes]
    for a, b in itertools.combinations(reps, 2):
        ans = conjugacy_search(pres, embed(pres, a), embed(pres, b), 2, ball_words=words)
        assert ans.status in ("no", "unknown")
    for cls in H.partition.classes:
        for b in cls[1:]:
            ans = conjugacy_search(pres, embed(pres, cls[0]), embed(pres, b), 2, ball_words=words)
            assert ans.status == "yes"
            x = parse_word(pres, ans.witness)
            assert conjugate(pres, x, embed(pres, cls[0])).syllables == embed(pres, b).syllables
    ans = conjugacy_search(pres, stable_word(0), embed(pres, 1), 1)
    assert ans.status == "no" and ans.witness["invariant"] == "exponent_vector"
    assert conjugacy_search(pres, embed(pres, 1), embed(pres, 3), 0).status == "unknown"
    with pytest.raises(TypeError):
        bool(ans)


def test_exponent_vector_is_conjugation_invariant(a1):
    pres = a1("C3")
    rng = random.Random(1)
    for _ in range(50):
        w, x = random_word(pres, rng), random_word(pres, rng)
        assert exponent_vector(pres, conjugate(pres, x, w)) == exponent_vector(pres, w)


@pytest.mark.parametrize("name, allowed", [("S3", {2, 3}), ("C4", {2, 4}), ("C2", {2})])
def test_torsion_survey(a1, name, allowed):
    pres = a1(name)
    found = torsion_survey(pres, 2, 24)
    assert found <= element_prime_powers(pres.source) == allowed
    assert found == allowed


def test_word_serialization_round_trip(a1):
    pres = a1("S3")
    rng = random.Random(8)
    for _ in range(50):
        w = canonicalize(pres, random_word(pres, rng)).syllables
        assert parse_word(pres, serialize_word(w)) == w
    assert parse_word(pres, ["b:12", "t:3:+1", "b:7"]) == (12, letter_code(3, 1), 7)
    assert serialize_word((0,)) == ["b:0"]


@pytest.mark.parametrize("tokens", [["b:99"], ["t:9:+1"], ["t:0:2"], ["q:1"], ["b:x"], ["t:1"]])
def test_malformed_words(a1, tokens):
    with pytest.raises(MalformedWord):
        parse_word(a1("S3"), tokens)


def test_malformed_syllables(a1):
    with pytest.raises(MalformedWord):
        britton_reduce(a1("C2"), (0, 1))
    with pytest.raises(MalformedWord):
        britton_reduce(a1("C2"), (0, 99, 0))


def test_a1_group_adapter(a1):
    A = A1Group(a1("C2"), radius=1)
    x = embed(A.pres, 1).syllables
    assert A.mul(x, x) == A.identity
    assert A.inv(x) == x
    assert A.same_class(x, x) is True
    assert A.same_class(x, A.identity) is False
    assert A.order_of(x) == 2
    assert A.order_of(stable_word(0).syllables) is None
