import cmath
from fractions import Fraction

import pytest

from grouplab.cyclotomic import Cyclotomic
from grouplab.groups import LambdaRing, all_subgroups, cyclic_subgroups, generated_subgroup, lambda_ring
from grouplab.reps import (
    ArtinAlarm,
    CharacterError,
    ClassFunction,
    action_from_generators,
    artin_decompose,
    induce,
    induced_cyclic_family,
    inner_product,
    kaplansky_rep,
    linear_characters,
    natural_action,
    permutation_character,
    regular_action,
    regular_character,
    reexpand,
    restrict,
    sigma,
    trivial_character,
)


def induce_oracle(H, sub, chi):
    """Complex-valued Frobenius formula over all x in H."""
    pos = sub.index_of
    out = []
    for h in H.elements():
        acc = 0j
        for x in H.elements():
            y = H.mul(H.mul(H.inv(x), h), x)
            if y in pos:
                acc += complex(chi(pos[y]))
        out.append(acc / sub.order)
    return out


def test_regular_and_trivial_characters(groups):
    G = groups["A4"]
    reg = permutation_character(G, regular_action(G))
    assert reg == regular_character(G)
    assert reg.degree() == 12
    one_point = permutation_character(G, [(0,)] * G.order)
    assert one_point == trivial_character(G)


def test_natural_character_of_s3(groups):
    G = groups["S3"]
    chi = permutation_character(G, natural_action(G))
    by_order = {G.partition.class_orders[k]: v for k, v in enumerate(chi.values)}
    assert by_order == {1: 3, 2: 1, 3: 0}


def test_action_must_be_homomorphism(groups):
    G = groups["S3"]
    acts = [tuple(p) for p in natural_action(G)]
    acts[1], acts[2] = acts[2], acts[1]
    with pytest.raises(CharacterError):
        permutation_character(G, acts)


def test_action_from_generator_images(groups):
    G = groups["S3"]
    acts = action_from_generators(G, 3, {1: G.labels[1], 2: G.labels[2]})
    assert acts == [tuple(p) for p in G.labels]


def test_linear_characters_small_cases(groups):
    C2 = groups["C2"]
    lams = linear_characters(C2)
    assert [list(l.values) for l in lams] == [[1, 1], [1, -1]]
    assert [list(l.values) for l in linear_characters(groups["C1"])] == [[1]]


@pytest.mark.parametrize("name", ["C3", "C4", "C6"])
def test_linear_characters_orthonormal(groups, name):
    lams = linear_characters(groups[name])
    for j, a in enumerate(lams):
        for k, b in enumerate(lams):
            assert inner_product(a, b) == (1 if j == k else 0)


def test_induction_examples(groups):
    S3 = groups["S3"]
    C3 = generated_subgroup(S3, [2])
    ind = induce(S3, C3, trivial_character(C3.as_group))
    by_order = {S3.partition.class_orders[k]: v for k, v in enumerate(ind.values)}
    assert by_order == {1: 2, 2: 0, 3: 2}
    whole = S3.as_subgroup()
    chi = permutation_character(S3, natural_action(S3))
    assert induce(S3, whole, ClassFunction(whole.as_group, chi.values)) == chi


@pytest.mark.parametrize("name", ["S3", "D4", "A4", "Q8"])
def test_induction_matches_complex_oracle_and_degree_law(groups, name):
    H = groups[name]
    for C in cyclic_subgroups(H):
        for lam in linear_characters(C.as_group):
            ind = induce(H, C, lam)
            expected = induce_oracle(H, C, lam)
            assert all(abs(complex(ind(h)) - e) < 1e-9 for h, e in zip(H.elements(), expected))
            assert ind.degree() == (H.order // C.order) * lam.degree()


@pytest.mark.parametrize("name", ["S3", "A4"])
def test_frobenius_reciprocity(groups, name):
    H = groups[name]
    chi = permutation_character(H, natural_action(H))
    for C in cyclic_subgroups(H):
        for lam in linear_characters(C.as_group):
            assert inner_product(induce(H, C, lam), chi) == inner_product(lam, restrict(chi, C))


@pytest.mark.parametrize("name", ["C6", "S3", "D4", "A4", "Q8", "C4"])
def test_artin_decomposition_of_standard_characters(groups, name):
    H = groups[name]
    chars = [trivial_character(H), regular_character(H), permutation_character(H, natural_action(H))]
    for chi in chars:
        dec = artin_decompose(H, chi)
        assert dec.verified
        assert reexpand(H, dec.terms) == chi
        for t in dec.terms:
            assert H.order % t.coeff.denominator == 0


def test_artin_of_a_virtual_character(groups):
    H = groups["A4"]
    chi = regular_character(H) - trivial_character(H) * 3
    dec = artin_decompose(H, chi)
    assert dec.verified and reexpand(H, dec.terms) == chi


def test_artin_rejects_non_integral_input(groups):
    H = groups["S3"]
    with pytest.raises(CharacterError):
        artin_decompose(H, trivial_character(H) * Fraction(1, 2))


def test_identity_indicator_needs_denominator_and_alarm_without_spanning_family(groups):
    # the indicator of the identity is reg/|H|: integral values, coefficient 1/2
    H = groups["C2"]
    chi = ClassFunction(H, (Fraction(1), Fraction(0)))
    dec = artin_decompose(H, chi)
    assert dec.scale == 2 and dec.verified
    family = [entry for entry in induced_cyclic_family(H) if entry[0].order == 2]
    with pytest.raises(ArtinAlarm):
        artin_decompose(H, chi, family=family[:1])


def test_kaplansky_rep_examples(groups):
    S3 = groups["S3"]
    assert kaplansky_rep(S3, trivial_character(S3)) == Fraction(1, 6)
    assert kaplansky_rep(S3, regular_character(S3)) == 1
    assert kaplansky_rep(S3, permutation_character(S3, natural_action(S3))) == Fraction(1, 2)


def test_sigma_examples(groups):
    S3 = groups["S3"]
    lam = lambda_ring(all_subgroups(S3))
    assert sigma([], lam) == (0, True)
    assert sigma([(S3, trivial_character(S3))], lam) == (Fraction(1, 6), True)
    C2, C3 = groups["C2"], groups["C3"]
    total, member = sigma([(C2, trivial_character(C2)), (C3, trivial_character(C3))], lam)
    assert total == Fraction(5, 6) and member
    assert sigma([(groups["C6"], trivial_character(groups["C6"]))], LambdaRing(frozenset({2})))[1] is False


def test_class_function_validation(groups):
    with pytest.raises(CharacterError):
        ClassFunction(groups["S3"], (1, 1))
    with pytest.raises(CharacterError):
        trivial_character(groups["S3"]) + trivial_character(groups["C3"])
    with pytest.raises(CharacterError):
        kaplansky_rep(groups["C3"], ClassFunction(groups["C3"], (Cyclotomic.zeta(3), 1, 1)))
