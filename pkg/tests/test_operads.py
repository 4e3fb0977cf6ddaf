"""Operad/cooperad structure constants, decompositions, convolution star."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convkit.linalg import LinMap, compose, graded_span, make_differential, zero_map
from convkit.operads import (
    ArityMap,
    Cooperad,
    IDENTITY,
    NsCollection,
    Operad,
    TwistingMorphism,
    as_cooperad,
    as_operad,
    check_operad_axioms,
    convolution_star,
    is_twisting_morphism,
    kappa,
    mu,
    mu_vee,
    zero_twisting,
)

AS4 = as_operad(4)
AS6 = as_operad(6)
COAS4 = as_cooperad(4)
COAS6 = as_cooperad(6)


# associative operad ----------------------------------------------------


def test_partial_composition_table():
    assert AS4.compose_symbols(mu(2), 1, mu(2)) == {mu(3): 1}
    assert AS4.compose_symbols(mu(2), 2, mu(2)) == {mu(3): 1}
    assert AS4.compose_symbols(mu(3), 2, mu(2)) == {mu(4): 1}
    assert AS4.compose_symbols(mu(2), 1, IDENTITY) == {mu(2): 1}
    assert AS4.compose_symbols(IDENTITY, 1, mu(3)) == {mu(3): 1}


def test_gamma_left_to_right():
    assert AS4.gamma_symbols(mu(2), (mu(2), mu(2))) == {mu(4): 1}
    assert AS4.gamma_symbols(mu(2), (IDENTITY, mu(3))) == {mu(4): 1}
    assert AS6.gamma_symbols(mu(3), (mu(2), IDENTITY, mu(2))) == {mu(5): 1}


def test_partial_compose_elements():
    m2 = AS4.space(2).basis(mu(2))
    out = AS4.partial_compose(m2, 1, 3 * m2)
    assert out.coeffs == {mu(3): Fraction(3)}


def test_operad_axiom_checker_rejects_bad_table():
    spaces = {n: graded_span("B(%d)" % n, (mu(n), 0)) for n in (2, 3, 4)}
    col = NsCollection("B", spaces)
    comp = {}
    for a in (2, 3):
        for b in (2, 3):
            if a + b - 1 > 4:
                continue
            for i in range(1, a + 1):
                comp[(mu(a), i, mu(b))] = {mu(a + b - 1): 1}
    comp[(mu(2), 1, mu(2))] = {mu(3): 2}  # inconsistent with the second slot
    with pytest.raises(AssertionError):
        Operad(col, comp)


def test_derivation_axiom():
    # d(h) = m forces h∘m and m∘h to hit the arity-3 "h" only
    sp2 = graded_span("D(2)", ("m", 0), ("h", 1))
    sp3 = graded_span("D(3)", ("m3", 0), ("h3", 1))
    col = NsCollection("D", {2: sp2, 3: sp3})
    diffs = {
        1: zero_map(col.space(1), col.space(1), degree=-1),
        2: make_differential(sp2, {("m", "h"): 1}),
        3: make_differential(sp3, {("m3", "h3"): 1}),
    }
    comp = {}
    for i in (1, 2):
        comp[("m", i, "m")] = {"m3": 1}
        comp[("h", i, "m")] = {"h3": 1}
        comp[("m", i, "h")] = {"h3": 1}
    Operad(col, comp, differentials=diffs)  # passes
    bad = dict(comp)
    bad[("h", 1, "m")] = {"m3": 1}
    with pytest.raises(AssertionError):
        Operad(col, bad, differentials=diffs)


# dual cooperad ---------------------------------------------------------


def test_dual_grading():
    assert COAS4.deg(mu_vee(2)) == 1
    assert COAS4.deg(mu_vee(4)) == 3
    assert COAS4.deg(IDENTITY) == 0


def test_one_step_decomposition_of_binary():
    terms = sorted(COAS4.decompose_symbol(mu_vee(2)))
    assert terms == sorted(
        [
            (Fraction(1), IDENTITY, 1, mu_vee(2)),
            (Fraction(1), mu_vee(2), 1, IDENTITY),
            (Fraction(1), mu_vee(2), 2, IDENTITY),
        ]
    )


def test_one_step_decomposition_signs():
    row = COAS4.delta1[mu_vee(3)]
    assert row == {
        (mu_vee(2), 1, mu_vee(2)): Fraction(1),
        (mu_vee(2), 2, mu_vee(2)): Fraction(-1),
    }
    row4 = COAS4.delta1[mu_vee(4)]
    assert row4 == {
        (mu_vee(2), 1, mu_vee(3)): Fraction(1),
        (mu_vee(2), 2, mu_vee(3)): Fraction(1),
        (mu_vee(3), 1, mu_vee(2)): Fraction(1),
        (mu_vee(3), 2, mu_vee(2)): Fraction(-1),
        (mu_vee(3), 3, mu_vee(2)): Fraction(1),
    }


def test_identity_decomposes_once():
    assert COAS4.decompose_symbol(IDENTITY) == [(Fraction(1), IDENTITY, 1, IDENTITY)]


def test_unsigned_table_is_not_a_cooperad():
    spaces = {
        n: graded_span("U(%d)" % n, (mu_vee(n), n - 1)) for n in range(2, 5)
    }
    col = NsCollection("U", spaces)
    delta1 = {}
    for n in range(2, 5):
        row = {}
        for n1 in range(2, n):
            n2 = n + 1 - n1
            for i in range(1, n1 + 1):
                row[(mu_vee(n1), i, mu_vee(n2))] = 1  # all signs dropped
        if row:
            delta1[mu_vee(n)] = row
    with pytest.raises(AssertionError):
        Cooperad(col, delta1)


def test_transpose_operad_satisfies_graded_axioms():
    check_operad_axioms(COAS6.transpose_operad(), max_arity=6)


def test_full_decomposition_small_oracles():
    assert COAS4.full_decompose(mu_vee(3), 1) == [(Fraction(1), IDENTITY, (mu_vee(3),))]
    two = sorted(COAS4.full_decompose(mu_vee(3), 2), key=repr)
    assert two == sorted(
        [
            (Fraction(1), mu_vee(2), (mu_vee(2), IDENTITY)),
            (Fraction(-1), mu_vee(2), (IDENTITY, mu_vee(2))),
        ],
        key=repr,
    )
    assert COAS4.full_decompose(mu_vee(3), 3) == [
        (Fraction(1), mu_vee(3), (IDENTITY, IDENTITY, IDENTITY))
    ]
    (term,) = [
        t
        for t in COAS4.full_decompose(mu_vee(4), 2)
        if t[2] == (mu_vee(2), mu_vee(2))
    ]
    assert term[0] == 1 and term[1] == mu_vee(2)


def _closed_form_sign(parts):
    # independent oracle: exponent Σ_{j≥2} (n_j − 1)(n_1 + … + n_{j−1})
    exp, before = 0, 0
    for j, nj in enumerate(parts):
        if j > 0:
            exp += (nj - 1) * before
        before += nj
    return (-1) ** (exp % 2)


def test_full_decomposition_matches_closed_form():
    from itertools import product as iproduct

    for n in range(2, 7):
        for k in range(1, n + 1):
            got = {
                (c0, inner): coeff
                for coeff, c0, inner in COAS6.full_decompose(mu_vee(n), k)
            }
            expected = {}
            for parts in iproduct(range(1, n + 1), repeat=k):
                if sum(parts) != n:
                    continue
                outer = IDENTITY if k == 1 else mu_vee(k)
                inner = tuple(IDENTITY if p == 1 else mu_vee(p) for p in parts)
                expected[(outer, inner)] = _closed_form_sign(parts)
            assert got == expected, (n, k)


def test_full_decomposition_term_count():
    from math import comb

    for n in range(2, 7):
        for k in range(1, n + 1):
            assert len(COAS6.full_decompose(mu_vee(n), k)) == comb(n - 1, k - 1)


# convolution star and twisting morphisms -------------------------------


def test_star_of_kappa_with_itself_vanishes():
    k = kappa(COAS6, AS6)
    sq = convolution_star(k, k)
    for n, m in sq.maps.items():
        assert m.is_zero(), (n, m.entries)


def test_star_summands_cancel_in_pairs():
    # on the ternary dual element the two contributions are ∓ the ternary
    # operation: position 1 gives −, position 2 gives +
    k = kappa(COAS4, AS4)
    row = COAS4.delta1[mu_vee(3)]
    contributions = {}
    for (l, i, r), coeff in row.items():
        sign = (-1) ** (1 * COAS4.deg(l) % 2)  # entry degree −1 ↔ exponent |left|
        out = AS4.compose_symbols(mu(2), i, mu(2))
        for t, c in out.items():
            contributions[i] = coeff * sign * c
    assert contributions == {1: Fraction(-1), 2: Fraction(1)}


def test_kappa_is_twisting_morphism():
    assert is_twisting_morphism(kappa(COAS4, AS4))
    assert is_twisting_morphism(kappa(COAS6, AS6))


def test_zero_is_twisting_morphism():
    assert is_twisting_morphism(zero_twisting(COAS4, AS4))


def test_wrong_degree_map_rejected():
    bad = ArityMap(
        COAS4,
        AS4,
        {3: LinMap(COAS4.space(3), AS4.space(3), {(mu(3), mu_vee(3)): 1})},
    )
    ok, problems = is_twisting_morphism(bad, report=True)
    assert not ok
    assert problems[0][0] == 3  # flagged in the ternary arity, a degree fault
    with pytest.raises(AssertionError):
        TwistingMorphism(COAS4, AS4, bad.maps)


def test_twisting_residual_reported_when_square_does_not_vanish():
    # a target whose two binary insertions disagree breaks the cancellation,
    # so the star-square of the obvious degree −1 map survives
    spaces = {2: graded_span("T(2)", ("t", 0)), 3: graded_span("T(3)", ("t3", 0))}
    col = NsCollection("T", spaces)
    lopsided = Operad(col, {("t", 1, "t"): {"t3": 1}})  # t ∘_2 t = 0
    coas3 = as_cooperad(3)
    alpha = ArityMap(
        coas3,
        lopsided,
        {2: LinMap(coas3.space(2), spaces[2], {("t", mu_vee(2)): 1}, degree=-1)},
        degree=-1,
    )
    ok, problems = is_twisting_morphism(alpha, report=True)
    assert not ok
    assert problems == [(3, "residual %r" % [(("t3", mu_vee(3)), Fraction(-1))])]


# pre-Lie structure of the convolution product --------------------------

scalars = st.builds(
    Fraction, st.integers(min_value=-6, max_value=6), st.integers(min_value=1, max_value=3)
)


def _scalar_family(coeffs):
    # one scalar per arity 2..5, map μ_n^∨ ↦ c_n μ_n
    maps = {}
    for n, c in coeffs.items():
        if c:
            maps[n] = LinMap(
                COAS6.space(n), AS6.space(n), {(mu(n), mu_vee(n)): c}
            )
    return ArityMap(COAS6, AS6, maps)


def _single_arity(n, c):
    return _scalar_family({n: c})


@settings(max_examples=40, deadline=None)
@given(
    st.dictionaries(st.integers(min_value=2, max_value=5), scalars, max_size=4),
    st.integers(min_value=2, max_value=5),
    scalars,
    st.integers(min_value=2, max_value=5),
    scalars,
)
def test_star_associator_is_koszul_symmetric(alpha_coeffs, nb, cb, ng, cg):
    # (α⋆β)⋆γ − α⋆(β⋆γ) is symmetric in β, γ up to the Koszul sign when
    # β, γ are homogeneous; here |β| = 1−n_β and |γ| = 1−n_γ
    alpha = _scalar_family(alpha_coeffs)
    beta, gamma = _single_arity(nb, cb), _single_arity(ng, cg)
    db, dg = 1 - nb, 1 - ng

    def assoc(x, y, z):
        return convolution_star(convolution_star(x, y), z) - convolution_star(
            x, convolution_star(y, z)
        )

    lhs = assoc(alpha, beta, gamma)
    rhs = (-1) ** ((db * dg) % 2) * assoc(alpha, gamma, beta)
    assert (lhs - rhs).is_zero()


@settings(max_examples=25, deadline=None)
@given(scalars)
def test_scalar_rescalings_of_kappa(c):
    # every scalar multiple of the canonical twisting morphism still squares
    # to zero under ⋆, hence stays twisting
    alpha = c * ArityMap(COAS4, AS4, kappa(COAS4, AS4).maps, degree=-1)
    assert convolution_star(alpha, alpha).is_zero()
    assert is_twisting_morphism(alpha)
