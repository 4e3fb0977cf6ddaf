from fractions import Fraction

from hypothesis import given
import hypothesis.strategies as st

from convkit.linalg import (
    GradedSpace,
    compose,
    graded_span,
    hom_differential,
    identity_map,
    is_chain_map,
    koszul_permutation_sign,
    koszul_symmetrize_maps,
    make_differential,
    tensor_map,
    tensor_space,
    LinMap,
    zero_map,
)

rationals = st.builds(
    Fraction, st.integers(min_value=-9, max_value=9), st.integers(min_value=1, max_value=4)
)


def two_term_complex(name, coeff):
    # one arrow: <name>1 (degree 1) -> <name>0 (degree 0), scaled by coeff
    sp = graded_span(name, (name + "1", 1), (name + "0", 0))
    d = make_differential(sp, {(name + "0", name + "1"): coeff})
    return sp, d


def test_space_basics():
    sp = graded_span("V", ("a", 0), ("b", 1))
    assert sp.dim == 2 and sp.deg("b") == 1
    e = sp.element({"a": 2, "b": 0})
    assert e.coeffs == {"a": Fraction(2)}  # zero pruned
    assert (e - e).is_zero()
    assert e.degree() == 0
    assert (sp.basis("a") + sp.basis("b")).degree() is None


def test_tensor_space_symbols_and_collision_guard():
    u = graded_span("U", ("a", 0), ("a⊗a", 1))
    v = graded_span("V", ("c", 0))
    t = tensor_space(u, v)
    assert set(t.symbols) == {"a⊗c", "(a⊗a)⊗c"}
    assert t.deg("(a⊗a)⊗c") == 1
    assert t.factorization["(a⊗a)⊗c"] == ("a⊗a", "c")


def test_tensor_map_identity_and_even_case():
    v = graded_span("V", ("v", 1), ("u", 0))
    idv = identity_map(v)
    assert tensor_map([idv]).entries == idv.entries
    w = graded_span("W", ("w", 0))
    f = LinMap(v, v, {("u", "v"): 1}, degree=-1)
    fid = tensor_map([identity_map(w), f])  # even map first: no signs
    assert fid.entries == {("w⊗u", "w⊗v"): Fraction(1)}


def test_tensor_map_koszul_sign_forced():
    # f, g of degree −1 applied to v⊗w with |v| = 1 picks up a −1
    v = graded_span("V", ("v", 1), ("v'", 0))
    w = graded_span("W", ("w", 1), ("w'", 0))
    f = LinMap(v, v, {("v'", "v"): 1}, degree=-1)
    g = LinMap(w, w, {("w'", "w"): 1}, degree=-1)
    fg = tensor_map([f, g])
    assert fg.entries[("v'⊗w'", "v⊗w")] == Fraction(-1)


def test_tensor_map_flattening_agrees_after_regrouping():
    v = graded_span("V", ("v", 1), ("v'", 0))
    f = LinMap(v, v, {("v'", "v"): 1}, degree=-1)
    g = LinMap(v, v, {("v'", "v"): 3, ("v", "v"): 2}, degree=None)
    h = identity_map(v)
    flat = tensor_map([f, g, h])
    nested = tensor_map([f, tensor_map([g, h])])
    regrouped = {
        (t.replace("(", "").replace(")", ""), s.replace("(", "").replace(")", "")): c
        for (t, s), c in nested.entries.items()
    }
    assert regrouped == flat.entries


def test_koszul_symmetrize_small_cases():
    v = graded_span("V", ("v", 0), ("u", 1))
    f_even = LinMap(v, v, {("v", "v"): 1}, degree=0)
    g_even = LinMap(v, v, {("v", "v"): 2}, degree=0)
    f_odd = LinMap(v, v, {("v", "u"): 1}, degree=-1)
    g_odd = LinMap(v, v, {("v", "u"): 5}, degree=-1)
    assert koszul_symmetrize_maps([f_even]) == [(Fraction(1), (f_even,))]
    evens = koszul_symmetrize_maps([f_even, g_even])
    assert [s for s, _ in evens] == [Fraction(1), Fraction(1)]
    odds = koszul_symmetrize_maps([f_odd, g_odd])
    assert {(s, p.index(f_odd)) for s, p in [(s, list(p)) for s, p in odds]} == {
        (Fraction(1), 0),
        (Fraction(-1), 1),
    }


def test_koszul_symmetrize_odd_pair_cancels():
    # two identical odd maps: the signed expansion sums to zero
    v = graded_span("V", ("v", 0), ("u", 1))
    f = LinMap(v, v, {("v", "u"): 1}, degree=-1)
    total = None
    for sign, perm in koszul_symmetrize_maps([f, f]):
        term = sign * tensor_map(list(perm))
        total = term if total is None else total + term
    assert total.is_zero()


def test_permutation_sign_convention():
    # swapping two odd slots is −1; even slots never contribute
    assert koszul_permutation_sign([1, 1], (1, 0)) == Fraction(-1)
    assert koszul_permutation_sign([2, 1], (1, 0)) == Fraction(1)
    assert koszul_permutation_sign([1, 1, 1], (2, 1, 0)) == Fraction(-1)


def test_compose_identity_and_shape_check():
    v = graded_span("V", ("v", 0))
    w = graded_span("W", ("w", 1))
    f = LinMap(v, w, {("w", "v"): 7}, degree=1)
    assert compose(identity_map(w), f) == f
    assert compose(f, identity_map(v)) == f


def test_chain_map_has_zero_hom_differential():
    v, dv = two_term_complex("v", 1)
    w, dw = two_term_complex("w", 1)
    f = LinMap(v, w, {("w1", "v1"): 3, ("w0", "v0"): 3}, degree=0)
    assert is_chain_map(f, dw, dv)
    assert hom_differential(f, dw, dv).is_zero()


@given(rationals, rationals, st.lists(rationals, min_size=4, max_size=4))
def test_hom_differential_squares_to_zero(a, b, fs):
    # ∂∂(f) = 0 for any f, including non-homogeneous f
    v, dv = two_term_complex("v", a)
    w, dw = two_term_complex("w", b)
    f = LinMap(
        v,
        w,
        {
            ("w1", "v1"): fs[0],
            ("w0", "v0"): fs[1],
            ("w0", "v1"): fs[2],
            ("w1", "v0"): fs[3],
        },
        degree=None,
    )
    ddf = hom_differential(hom_differential(f, dw, dv), dw, dv)
    assert ddf.is_zero()


@given(rationals, rationals, rationals, rationals, rationals, rationals, rationals)
def test_graded_leibniz_for_hom_differential(a, b, c, p, q, r, s):
    # ∂(g∘f) = ∂(g)∘f + (−1)^{|g|} g∘∂(f) with |g| = −1
    v, dv = two_term_complex("v", a)
    w, dw = two_term_complex("w", b)
    u, du = two_term_complex("u", c)
    f = LinMap(v, w, {("w1", "v1"): p, ("w0", "v0"): q}, degree=0)
    g = LinMap(w, u, {("u0", "w1"): r}, degree=-1)
    lhs = hom_differential(compose(g, f), du, dv)
    rhs = hom_differential(g, du, dw) @ f - g @ hom_differential(f, dw, dv)
    assert (lhs - rhs).is_zero()


def test_differential_square_zero_enforced():
    sp = graded_span("V", ("a", 1), ("b", 0), ("c", -1))
    try:
        make_differential(sp, {("b", "a"): 1, ("c", "b"): 1})
    except AssertionError:
        pass
    else:
        raise AssertionError("d with d² ≠ 0 was accepted")


def test_non_homogeneous_components():
    v = graded_span("V", ("v", 1), ("u", 0))
    m = LinMap(v, v, {("v", "v"): 1, ("u", "v"): 2}, degree=None)
    comps = m.homogeneous_components()
    assert set(comps) == {0, -1}
    assert comps[-1].entries == {("u", "v"): Fraction(2)}
    assert zero_map(v, v).is_zero()
