"""Worked instances shared by the tests, the acceptance battery and the
command line.

Each builder returns a plain dict of the cast members (twisting
morphism, carriers, convolution instances, distinguished elements), so
callers can pick what they need.  The star exhibit is appendix_a: a
zero-twist cast in which the two one-sided composition actions give
genuinely different composites depending on which is applied first.
"""

from itertools import product

from .algebras import (
    Algebra,
    Coalgebra,
    bar,
    cobar,
    cofree_coalgebra,
    free_algebra,
)
from .convolution import (
    ResolutionView,
    build_convolution,
    rectify,
    two_sided_resolution,
)
from .linalg import LinMap, graded_span, make_differential, tensor_symbol
from .operads import IDENTITY, as_cooperad, as_operad, kappa, mu, mu_vee, zero_twisting


def word(*factors):
    return tensor_symbol(list(factors))


def atom(s, t):
    return s + "↦" + t


# small carriers ------------------------------------------------------------


def point_algebra(op, name="w"):
    """One-dimensional carrier on which every operation evaluates to the
    generator."""
    sp = graded_span("Q" + name, (name, 0))
    action = {}
    for n in op.collection.spaces:
        if n < 2:
            continue
        for p in op.collection.symbols(n):
            action[(p, (name,) * n)] = {name: 1}
    return Algebra(op, sp, action)


def two_dim_algebra(op):
    """Idempotent a, square-zero b of degree 1, d(b) = a."""
    sp = graded_span("A2", ("a", 0), ("b", 1))
    action = {}
    for n in op.collection.spaces:
        if n < 2:
            continue
        for args in product(("a", "b"), repeat=n):
            hits = args.count("b")
            if hits == 0:
                action[(mu(n), args)] = {"a": 1}
            elif hits == 1:
                action[(mu(n), args)] = {"b": 1}
    d = make_differential(sp, {("a", "b"): 1})
    return Algebra(op, sp, action, differential=d)


def line_coalgebra(coop, name="x", degree=0):
    """One-dimensional coalgebra with no decompositions."""
    sp = graded_span("Q" + name, (name, degree))
    return Coalgebra(coop, sp, {})


# desk instances for the morphism correspondence ----------------------------


def desk_point(W=4):
    """Classical twist into a point target, cofree source of depth W."""
    op, coop = as_operad(max(W, 2)), as_cooperad(max(W, 2))
    alpha = kappa(coop, op)
    A = point_algebra(op)
    C = cofree_coalgebra(coop, graded_span("Y", ("y", 0)), W)
    h = build_convolution(alpha, C, A)
    barA = bar(alpha, A, W)
    OmC = cobar(alpha, C, W)
    # Maurer–Cartan atoms: with neither carrier differential, the single
    # binary constraint kills the low filtration stages, leaving the two
    # deepest word atoms free
    f = h.mc(
        {
            atom(word(mu_vee(3), "y", "y", "y"), "w"): 1,
            atom(word(mu_vee(4), "y", "y", "y", "y"), "w"): 2,
        }
    )
    return {
        "name": "point",
        "alpha": alpha,
        "C": C,
        "A": A,
        "h": h,
        "barA": barA,
        "OmC": OmC,
        "f": f,
    }


def desk_two_dim(W=2):
    """Classical twist into the two-dimensional differential algebra."""
    op, coop = as_operad(4), as_cooperad(4)
    alpha = kappa(coop, op)
    A = two_dim_algebra(op)
    C = cofree_coalgebra(coop, graded_span("Y", ("y", 0)), W)
    h = build_convolution(alpha, C, A)
    barA = bar(alpha, A, W)
    OmC = cobar(alpha, C, W)
    # f(y-atom) = a forces f(yy-atom) = −b: the target differential of −b
    # cancels the idempotent square of a in the binary bracket
    f = h.mc(
        {
            atom(word(IDENTITY, "y"), "a"): 1,
            atom(word(mu_vee(2), "y", "y"), "b"): -1,
        }
    )
    return {
        "name": "two-dim",
        "alpha": alpha,
        "C": C,
        "A": A,
        "h": h,
        "barA": barA,
        "OmC": OmC,
        "f": f,
    }


def desk_graded(W=2):
    """Classical twist with a graded source whose cogenerators carry a
    differential d(z) = y."""
    op, coop = as_operad(4), as_cooperad(4)
    alpha = kappa(coop, op)
    A = point_algebra(op)
    cogens = graded_span("YZ", ("y", 0), ("z", 1))
    dz = make_differential(cogens, {("y", "z"): 1})
    C = cofree_coalgebra(coop, cogens, W, cogen_differential=dz, check=True)
    h = build_convolution(alpha, C, A)
    barA = bar(alpha, A, W)
    OmC = cobar(alpha, C, W)
    # solved by hand: with f = b·(z-atom) + β·(zy) + γ·(yz) + δ·(zz) the
    # residual vanishes iff γ = β + b²; the y-atom coefficient must vanish
    f = h.mc(
        {
            atom(word(IDENTITY, "z"), "w"): 1,
            atom(word(mu_vee(2), "y", "z"), "w"): 1,
        }
    )
    return {
        "name": "graded",
        "alpha": alpha,
        "C": C,
        "A": A,
        "h": h,
        "barA": barA,
        "OmC": OmC,
        "f": f,
    }


def desk_bar_source(W=4, scale=1):
    """Classical twist whose source is the twisted cofree coalgebra on
    the point algebra itself; the distinguished element is the geometric
    atom series, Maurer–Cartan for every scale."""
    op, coop = as_operad(max(W, 2)), as_cooperad(max(W, 2))
    alpha = kappa(coop, op)
    A = point_algebra(op)
    B = bar(alpha, A, W)
    h = build_convolution(alpha, B, A)
    OmC = cobar(alpha, B, W)
    coeffs = {atom(word(IDENTITY, "w"), "w"): 1}
    for k in range(2, W + 1):
        coeffs[atom(word(mu_vee(k), *(["w"] * k)), "w")] = scale ** (k - 1)
    f = h.mc(coeffs)
    return {
        "name": "bar-source",
        "alpha": alpha,
        "C": B,
        "A": A,
        "h": h,
        "barA": B,
        "OmC": OmC,
        "f": f,
    }


def desk_instances():
    return [desk_point(), desk_two_dim(), desk_graded(), desk_bar_source()]


# casts for the one-sided composition actions -------------------------------


def action_cast_right():
    """Postcomposition-action cast: both the bar-side differential and
    the target differential are active."""
    op, coop = as_operad(4), as_cooperad(4)
    alpha = kappa(coop, op)
    A = two_dim_algebra(op)
    C = cofree_coalgebra(coop, graded_span("Y", ("y", 0)), 2)
    h = build_convolution(alpha, C, A)
    barA = bar(alpha, A, 2)
    h_def = build_convolution(alpha, barA, A)
    return {"alpha": alpha, "h": h, "h_target": h, "h_def": h_def}


def action_cast_left():
    """Precomposition-action cast: morphism data from a second cofree
    coalgebra into the twisted free algebra on the source."""
    op, coop = as_operad(4), as_cooperad(4)
    alpha = kappa(coop, op)
    A = point_algebra(op)
    C = cofree_coalgebra(coop, graded_span("Y", ("y", 0)), 2)
    Cp = cofree_coalgebra(coop, graded_span("U", ("u", 0)), 2)
    h = build_convolution(alpha, C, A)
    h_target = build_convolution(alpha, Cp, A)
    OmC = cobar(alpha, C, 3)
    h_def = build_convolution(alpha, Cp, ResolutionView(OmC))
    # atoms whose word stays below the twist-raising boundary, so every
    # differential row touching them is complete
    pool = [a for a, (s, t) in h_def.atoms.items() if OmC.weights[t] <= 2]
    return {
        "alpha": alpha,
        "h": h,
        "h_target": h_target,
        "OmC": OmC,
        "h_def": h_def,
        "pool": pool,
    }


# the order-sensitivity counterexample --------------------------------------


def appendix_a():
    """Zero-twist cast in which the two composition orders differ.

    One source line x, a depth-two cofree coalgebra on y, the free
    algebra on z as middle target, a point as final target.  The
    precomposition datum sends x to a single weight-two word; the
    postcomposition datum reads off both word shapes of the middle
    target.  Applying the precomposition leg first gives the zero
    composite, the other order evaluates to the point generator.
    """
    op, coop = as_operad(4), as_cooperad(4)
    alpha = zero_twisting(coop, op)
    C = cofree_coalgebra(coop, graded_span("Y", ("y", 0)), 2)
    Cp = line_coalgebra(coop, "x")
    A = free_algebra(op, graded_span("Z", ("z", 0)), 2)
    Ap = point_algebra(op)
    corners = {
        "CA": build_convolution(alpha, C, A),
        "CAp": build_convolution(alpha, C, Ap),
        "CpA": build_convolution(alpha, Cp, A),
        "CpAp": build_convolution(alpha, Cp, Ap),
    }
    OmC = cobar(alpha, C, 3)
    v1 = word(IDENTITY, "y")
    v2 = word(mu_vee(2), "y", "y")
    a1 = word(IDENTITY, "z")
    phi = LinMap(
        Cp.space,
        OmC.space,
        {(word(mu(2), v2, v1), "x"): 1},
    )
    barA = bar(alpha, A, 2)
    h_psi = build_convolution(alpha, barA, Ap)
    psi = h_psi.mc(
        {
            atom(word(IDENTITY, a1), "w"): 1,
            atom(word(mu_vee(2), a1, a1), "w"): 1,
        }
    )
    f = corners["CA"].mc({atom(v1, a1): 1})
    return {
        "alpha": alpha,
        "corners": corners,
        "OmC": OmC,
        "barA": barA,
        "h_psi": h_psi,
        "phi": phi,
        "psi": psi,
        "f": f,
        "v1": v1,
        "v2": v2,
        "a1": a1,
    }


# the classical-twist equalizer cast -----------------------------------------


def kappa_equalizer(WR=4):
    """Classical-twist cast where the two composite orders genuinely
    differ: target algebra with an idempotent scaled by 2, so the
    one-sided actions disagree already at arity two (coefficient 2
    against 4), plus the two-sided resolution data needed to compare
    the orders after restriction along the counit and after replacing
    the postcomposition datum by its strict rectification.

    The postcomposition datum is non-strict (weight-two entry −2) and
    satisfies the flatness equation at every bar truncation; the
    precomposition datum pairs the weight-one word with a weight-two
    word on the same cogenerator.
    """
    op, coop = as_operad(max(WR, 2)), as_cooperad(max(WR, 2))
    alpha = kappa(coop, op)
    A = two_dim_algebra(op)
    C = cofree_coalgebra(coop, graded_span("Y", ("y", 0)), 2)
    Cp = line_coalgebra(coop, "x")
    corners = {
        "CA": build_convolution(alpha, C, A),
        "CAp": build_convolution(alpha, C, A),
        "CpA": build_convolution(alpha, Cp, A),
        "CpAp": build_convolution(alpha, Cp, A),
    }
    OmC = cobar(alpha, C, 3)
    v1 = word(IDENTITY, "y")
    phi = LinMap(
        Cp.space,
        OmC.space,
        {(word(IDENTITY, v1), "x"): 1, (word(mu(2), v1, v1), "x"): 1},
    )
    B = bar(alpha, A, WR)
    h_psi = build_convolution(alpha, B, A)
    psi = h_psi.mc(
        {
            atom(word(IDENTITY, "a"), "a"): 2,
            atom(word(IDENTITY, "b"), "b"): 2,
            atom(word(mu_vee(2), "a", "a"), "b"): -2,
        }
    )
    R, eps = two_sided_resolution(alpha, A, WR)
    view = ResolutionView(R)
    resolution = build_convolution(alpha, C, view)
    res_corners = {
        "CA": resolution,
        "CAp": resolution,
        "CpA": build_convolution(alpha, Cp, view),
    }
    res_corners["CpAp"] = res_corners["CpA"]
    rpsi = rectify(h_psi, psi, B, R, R)
    return {
        "alpha": alpha,
        "corners": corners,
        "OmC": OmC,
        "B": B,
        "h_psi": h_psi,
        "phi": phi,
        "psi": psi,
        "R": R,
        "eps": eps,
        "resolution": resolution,
        "res_corners": res_corners,
        "rpsi": rpsi,
    }


BUILTIN = {
    "builtin:appendixA": appendix_a,
    "builtin:kappaEqualizer": kappa_equalizer,
}
