"""Shifted homotopy Lie structure as explicit bracket families.

A BracketFamily is a finite graded carrier with a square-zero
differential ℓ₁ and degree −1 brackets ℓ_n given by sparse structure
constants on basis tuples.  Planar families make no symmetry assumption
and sum Maurer–Cartan series without factorials; symmetric families are
graded-symmetric and carry the 1/n! weights.  On top of the family type
the module provides the generalized Jacobi sweep, Maurer–Cartan elements
and residuals, arity-indexed morphism families with pushforward and
block composition, a weight-truncated bar coalgebra used as the chain
arbiter for morphism validity, and polynomial path elements for checking
gauge equivalences.
"""

from fractions import Fraction
from itertools import combinations, product
from math import factorial

from .algebras import Coalgebra, _word_basis, cofree_coalgebra
from .linalg import (
    Element,
    LinMap,
    ONE,
    ZERO,
    compose,
    graded_span,
    identity_map,
    koszul_permutation_sign,
    koszul_symmetrize,
    rat,
    tensor_symbol,
    zero_map,
)
from .operads import Cooperad, IDENTITY, NsCollection, subscript


class DivergenceError(Exception):
    """A Maurer–Cartan series whose tail cannot be certified to vanish."""


# bracket families -------------------------------------------------------


class BracketFamily:
    """Graded carrier with a differential and degree −1 n-ary brackets.

    rows(n, syms) returns the structure constants of ℓ_n on a basis
    tuple as a sparse dict; evaluations are memoized.  mode is "planar"
    (no input symmetry, no factorials) or "symmetric" (brackets
    graded-symmetric, 1/n! in Maurer–Cartan sums).  weights optionally
    assigns a filtration stage to each basis symbol; complete=True
    certifies that every bracket above max_arity vanishes identically,
    which is what licenses finite Maurer–Cartan sums.
    """

    def __init__(
        self,
        space,
        differential=None,
        rows=None,
        mode="planar",
        max_arity=4,
        weights=None,
        complete=True,
    ):
        assert mode in ("planar", "symmetric"), mode
        assert max_arity >= 1, max_arity
        self.space = space
        self.differential = differential or zero_map(space, space, degree=-1)
        self._rows = rows
        self.mode = mode
        self.max_arity = max_arity
        self.weights = weights
        self.complete = complete
        self._memo = {}

    def bracket_symbols(self, n, syms):
        """Structure constants of ℓ_n on a basis tuple, sparse."""
        assert n >= 2, n
        assert n <= self.max_arity, ("arity above bound", n, self.max_arity)
        syms = tuple(syms)
        assert len(syms) == n, (n, syms)
        key = (n, syms)
        if key not in self._memo:
            row = self._rows(n, syms) if self._rows else {}
            self._memo[key] = {t: rat(c) for t, c in row.items() if rat(c)}
        return dict(self._memo[key])


def abelian_family(space, differential=None, mode="planar", max_arity=4):
    """All higher brackets zero; only the differential acts."""
    return BracketFamily(space, differential, None, mode, max_arity)


def family_from_table(space, differential, table, **kw):
    """Family with brackets read off an explicit {(n, syms): row} table."""

    def rows(n, syms):
        return table.get((n, tuple(syms)), {})

    return BracketFamily(space, differential, rows, **kw)


def eval_bracket(g, n, args):
    """Multilinear evaluation of ℓ_n; n = 1 applies the differential."""
    args = [a if isinstance(a, Element) else g.space.basis(a) for a in args]
    assert len(args) == n, ("arity mismatch", n, len(args))
    assert n >= 1 and n <= g.max_arity, ("arity above bound", n, g.max_arity)
    if n == 1:
        return g.differential(args[0])
    out = {}
    for combo in product(*[list(a.coeffs.items()) for a in args]):
        coeff = ONE
        for _, c in combo:
            coeff *= c
        row = g.bracket_symbols(n, tuple(s for s, _ in combo))
        for t, c2 in row.items():
            out[t] = out.get(t, ZERO) + coeff * c2
    return Element(g.space, out)


def _row(g, k, syms):
    if k == 1:
        return g.differential.apply_symbol(syms[0])
    return g.bracket_symbols(k, syms)


def check_bracket_symmetry(g, up_to_arity=None):
    """Graded symmetry of every bracket under adjacent transpositions."""
    assert g.mode == "symmetric", g.mode
    bound = up_to_arity or g.max_arity
    deg = g.space.deg
    for n in range(2, bound + 1):
        for syms in product(g.space.symbols, repeat=n):
            for i in range(n - 1):
                swapped = list(syms)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                sgn = (-1) ** ((deg(syms[i]) * deg(syms[i + 1])) % 2)
                lhs = g.bracket_symbols(n, syms)
                rhs = g.bracket_symbols(n, tuple(swapped))
                want = {t: sgn * c for t, c in rhs.items()}
                if lhs != want:
                    return False, (n, syms, i)
    return True, None


def symmetrize_family(g):
    """Sum of a planar family over Koszul-signed input orderings."""
    assert g.mode == "planar", g.mode
    deg = g.space.deg

    def rows(n, syms):
        degs = [deg(s) for s in syms]
        out = {}
        for sign, perm in koszul_symmetrize(degs):
            row = g.bracket_symbols(n, tuple(syms[i] for i in perm))
            for t, c in row.items():
                out[t] = out.get(t, ZERO) + sign * c
        return out

    return BracketFamily(
        g.space,
        g.differential,
        rows,
        mode="symmetric",
        max_arity=g.max_arity,
        weights=g.weights,
        complete=g.complete,
    )


# generalized Jacobi sweep ------------------------------------------------


def _symmetric_relation(g, syms):
    """Σ_{p+q=m+1} over (q, m−q)-unshuffles of ±ℓ_p(ℓ_q(…), rest)."""
    m = len(syms)
    degs = [g.space.deg(s) for s in syms]
    out = {}
    for q in range(1, m + 1):
        p = m + 1 - q
        for sel in combinations(range(m), q):
            rest = [i for i in range(m) if i not in sel]
            perm = list(sel) + rest
            sign = koszul_permutation_sign(degs, perm)
            inner = _row(g, q, tuple(syms[i] for i in sel))
            rest_syms = tuple(syms[i] for i in rest)
            for t, c in inner.items():
                for u, c2 in _row(g, p, (t,) + rest_syms).items():
                    out[u] = out.get(u, ZERO) + sign * c * c2
    return {k: v for k, v in out.items() if v}


def _planar_relation(g, syms):
    """Σ over consecutive blocks of ±ℓ(…, ℓ(block), …), sign from the
    degrees of the inputs left of the block."""
    m = len(syms)
    deg = g.space.deg
    out = {}
    for s in range(1, m + 1):
        for r in range(0, m - s + 1):
            t_ = m - r - s
            sign = (-1) ** (sum(deg(x) for x in syms[:r]) % 2)
            inner = _row(g, s, syms[r : r + s])
            for t, c in inner.items():
                outer = _row(g, r + 1 + t_, syms[:r] + (t,) + syms[r + s :])
                for u, c2 in outer.items():
                    out[u] = out.get(u, ZERO) + sign * c * c2
    return {k: v for k, v in out.items() if v}


def check_generalized_jacobi(g, up_to_arity=None):
    """Defining relations of the family on all basis tuples.

    Symmetric mode sums over unshuffles with Koszul signs, planar mode
    over consecutive blocks; m = 1 re-checks ℓ₁² = 0.  Stops at the
    first violating tuple.
    """
    bound = up_to_arity or g.max_arity
    assert bound <= g.max_arity, ("arity above bound", bound, g.max_arity)
    relation = _symmetric_relation if g.mode == "symmetric" else _planar_relation
    checked = 0
    for m in range(1, bound + 1):
        for syms in product(g.space.symbols, repeat=m):
            res = relation(g, syms)
            checked += 1
            if res:
                return {
                    "ok": False,
                    "checked": checked,
                    "violation": {"arity": m, "inputs": syms, "residual": res},
                }
    return {"ok": True, "checked": checked, "violation": None}


# Maurer–Cartan elements --------------------------------------------------


def _guard(g):
    if not g.complete:
        raise DivergenceError(
            ("brackets above the arity bound not certified zero", g.space.name)
        )


def mc_residual(g, x):
    """d(x) + Σ_{n≥2} ℓ_n(x,…,x), with 1/n! in symmetric mode."""
    if isinstance(x, MCElement):
        x = x.element
    if isinstance(x, dict):
        x = g.space.element(x)
    _guard(g)
    out = g.differential(x)
    for n in range(2, g.max_arity + 1):
        term = eval_bracket(g, n, [x] * n)
        if g.mode == "symmetric":
            term = Fraction(1, factorial(n)) * term
        out = out + term
    return out


class MCElement:
    """A carrier element whose Maurer–Cartan residual vanishes.

    candidate=True skips the residual assertion, for sweeping families
    of would-be solutions.
    """

    def __init__(self, family, element, candidate=False):
        if isinstance(element, dict):
            element = family.space.element(element)
        assert element.space == family.space, element.space.name
        self.family = family
        self.element = element
        if not candidate:
            r = mc_residual(family, element)
            assert r.is_zero(), ("Maurer-Cartan residual nonzero", r.coeffs)

    def residual(self):
        return mc_residual(self.family, self.element)

    def is_mc(self):
        return self.residual().is_zero()


# morphism families -------------------------------------------------------


def _as_rows(m):
    if isinstance(m, LinMap):
        return lambda syms: m.apply_symbol(syms[0])
    if isinstance(m, dict):
        table = {tuple(k) if isinstance(k, tuple) else (k,): v for k, v in m.items()}
        return lambda syms: table.get(tuple(syms), {})
    assert callable(m), m
    return m


class InfMorphism:
    """Arity-indexed family of maps between bracket families.

    maps is a dict n ↦ component, each component a LinMap (n = 1), an
    explicit {syms: row} table, or a callable on basis tuples.  Validity
    is the chain condition of the induced map between weight-truncated
    bar coalgebras and is checked on demand by check_inf_morphism;
    composition and identity preserve it.
    """

    def __init__(self, source, target, maps, max_arity=None):
        self.source = source
        self.target = target
        self._maps = {n: _as_rows(m) for n, m in maps.items()}
        self.max_arity = max_arity or (max(self._maps) if self._maps else 1)
        self._memo = {}

    def component_symbols(self, n, syms):
        """Structure constants of θ_n on a basis tuple, sparse."""
        syms = tuple(syms)
        assert len(syms) == n, (n, syms)
        if n not in self._maps:
            return {}
        key = (n, syms)
        if key not in self._memo:
            row = self._maps[n](syms)
            self._memo[key] = {t: rat(c) for t, c in row.items() if rat(c)}
        return dict(self._memo[key])

    def component(self, n, args):
        """Multilinear evaluation of θ_n on carrier elements."""
        args = [
            a if isinstance(a, Element) else self.source.space.basis(a) for a in args
        ]
        assert len(args) == n, (n, len(args))
        out = {}
        for combo in product(*[list(a.coeffs.items()) for a in args]):
            coeff = ONE
            for _, c in combo:
                coeff *= c
            row = self.component_symbols(n, tuple(s for s, _ in combo))
            for t, c2 in row.items():
                out[t] = out.get(t, ZERO) + coeff * c2
        return Element(self.target.space, out)


def identity_inf(g):
    return InfMorphism(g, g, {1: identity_map(g.space)})


def strict_inf(source, target, f):
    """Morphism family with only a linear part."""
    return InfMorphism(source, target, {1: f})


def mc_push(theta, x, candidate=False):
    """Σ_{n≥1} θ_n(x,…,x) (1/n! in symmetric mode), asserted MC."""
    el = x.element if isinstance(x, MCElement) else x
    if isinstance(el, dict):
        el = theta.source.space.element(el)
    _guard(theta.source)
    out = theta.target.space.zero()
    for n in range(1, theta.max_arity + 1):
        term = theta.component(n, [el] * n)
        if theta.source.mode == "symmetric":
            term = Fraction(1, factorial(n)) * term
        out = out + term
    return MCElement(theta.target, out, candidate=candidate)


def _compositions(n, k, cap):
    """Ordered splittings of n into k parts, each between 1 and cap."""
    if k == 1:
        return [(n,)] if 1 <= n <= cap else []
    out = []
    for first in range(1, min(cap, n - k + 1) + 1):
        for rest in _compositions(n - first, k - 1, cap):
            out.append((first,) + rest)
    return out


def _tensor_family_rows(theta, blocks):
    """Entry-wise θ_{|b₁|}⊗…⊗θ_{|b_k|} on a tuple of blocks.

    Returns {out-tuple: coeff} with the Koszul sign of each component
    (degree = output minus block degree) passing the blocks before it.
    """
    deg_s = theta.source.space.deg
    deg_t = theta.target.space.deg
    base = [sum(deg_s(s) for s in b) for b in blocks]
    rows = [theta.component_symbols(len(b), b) for b in blocks]
    out = {}
    for combo in product(*[list(r.items()) for r in rows]):
        exp = 0
        below = 0
        coeff = ONE
        outs = []
        for j, (t, c) in enumerate(combo):
            exp += (deg_t(t) - base[j]) * below
            below += base[j]
            coeff *= c
            outs.append(t)
        key = tuple(outs)
        out[key] = out.get(key, ZERO) + ((-1) ** (exp % 2)) * coeff
    return {k: v for k, v in out.items() if v}


def compose_inf(theta2, theta1):
    """Block composition (Θ′∘Θ)_n = Σ θ′_k(θ_{n₁}⊗…⊗θ_{n_k})."""
    assert theta1.target.space == theta2.source.space, "families not composable"
    bound = theta1.max_arity * theta2.max_arity

    def rows_for(n):
        def rows(syms):
            out = {}
            for k in range(1, min(n, theta2.max_arity) + 1):
                for comp in _compositions(n, k, theta1.max_arity):
                    blocks = []
                    pos = 0
                    for size in comp:
                        blocks.append(tuple(syms[pos : pos + size]))
                        pos += size
                    for mid, c in _tensor_family_rows(theta1, blocks).items():
                        for u, c2 in theta2.component_symbols(k, mid).items():
                            out[u] = out.get(u, ZERO) + c * c2
            return out

        return rows

    maps = {n: rows_for(n) for n in range(1, bound + 1)}
    return InfMorphism(theta1.source, theta2.target, maps, max_arity=bound)


# bar coalgebra of a family ----------------------------------------------


def _blk(n):
    return "blk" + subscript(n)


_BLOCK_MEMO = {}


def block_cooperad(max_arity):
    """Degree-0 block-splitting cooperad: one marker per arity, every
    consecutive two-level split carrying coefficient +1."""
    if max_arity not in _BLOCK_MEMO:
        spaces = {
            n: graded_span("Blk^∨(%d)" % n, (_blk(n), 0))
            for n in range(2, max_arity + 1)
        }
        col = NsCollection("Blk^∨", spaces)
        delta1 = {}
        for n in range(2, max_arity + 1):
            row = {}
            for n1 in range(2, n):
                n2 = n + 1 - n1
                if n2 < 2:
                    continue
                for i in range(1, n1 + 1):
                    row[(_blk(n1), i, _blk(n2))] = ONE
            if row:
                delta1[_blk(n)] = row
        _BLOCK_MEMO[max_arity] = Cooperad(col, delta1)
    return _BLOCK_MEMO[max_arity]


def family_bar(g, W, check=False):
    """Weight-truncated bar coalgebra of a planar family.

    Cofree block-marked words on the carrier; the differential is the
    coderivation of ℓ₁ plus, for every consecutive block, contraction by
    the matching bracket with the sign of a degree −1 operation passing
    the carriers before the block.  Contraction never raises weight, so
    the truncation is an honest quotient; d² = 0 holds exactly when the
    family satisfies the planar relations (check=True asserts it).
    """
    assert g.mode == "planar", g.mode
    coop = block_cooperad(max(W, 2))
    base = cofree_coalgebra(coop, g.space, W, cogen_differential=g.differential)
    parts = {
        sym: (c0, vs) for sym, _, c0, vs, _ in _word_basis(coop.collection, g.space, W)
    }
    deg = g.space.deg
    d2_entries = {}
    for sym in base.space.symbols:
        c0, vs = parts[sym]
        for s, left, i, right in coop.decompose_symbol(c0):
            ra = coop.arity_of(right)
            if ra < 2 or ra > g.max_arity:
                continue
            below = sum(deg(v) for v in vs[: i - 1])
            sgn = (-1) ** (below % 2)
            block = vs[i - 1 : i - 1 + ra]
            for out_sym, c in g.bracket_symbols(ra, block).items():
                t = tensor_symbol(
                    [left] + list(vs[: i - 1]) + [out_sym] + list(vs[i - 1 + ra :])
                )
                key = (t, sym)
                d2_entries[key] = d2_entries.get(key, ZERO) + s * sgn * c
    diff = base.differential + LinMap(
        base.space, base.space, d2_entries, degree=-1
    )
    if check:
        assert compose(diff, diff).is_zero(), "bar differential d² ≠ 0"
    out = Coalgebra(
        coop,
        base.space,
        base.delta,
        differential=diff,
        weights=base.weights,
        max_weight=base.max_weight,
        check=False,
    )
    out.parts = parts
    return out


def bar_morphism(theta, bar_source, bar_target):
    """Induced map of bar coalgebras: split the word into blocks, apply
    the matching components, re-mark with the block count."""
    entries = {}
    for sym in bar_source.space.symbols:
        _, vs = bar_source.parts[sym]
        m = len(vs)
        for k in range(1, m + 1):
            for comp in _compositions(m, k, theta.max_arity):
                blocks = []
                pos = 0
                for size in comp:
                    blocks.append(tuple(vs[pos : pos + size]))
                    pos += size
                head = IDENTITY if k == 1 else _blk(k)
                for outs, c in _tensor_family_rows(theta, blocks).items():
                    t = tensor_symbol([head] + list(outs))
                    key = (t, sym)
                    entries[key] = entries.get(key, ZERO) + c
    return LinMap(bar_source.space, bar_target.space, entries)


def check_inf_morphism(theta, W, report=False):
    """Chain condition of the induced bar-coalgebra map at weight ≤ W."""
    bar_s = family_bar(theta.source, W)
    bar_t = family_bar(theta.target, W)
    F = bar_morphism(theta, bar_s, bar_t)
    gap = compose(bar_t.differential, F) + (-1) * compose(F, bar_s.differential)
    if report:
        return gap.is_zero(), gap
    return gap.is_zero()


# polynomial paths and gauge witnesses ------------------------------------


class Poly:
    """Exact univariate polynomial, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls([c])

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly(
            [
                (a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO)
                for i in range(n)
            ]
        )

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([rat(other) * c for c in self.coeffs])
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    def __rmul__(self, scalar):
        return self * scalar

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, t):
        t = rat(t)
        out = ZERO
        for c in reversed(self.coeffs):
            out = out * t + c
        return out

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose_affine(self, a, b):
        """p(a·t + b), exactly."""
        lin = Poly([b, a])
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * lin + Poly([c])
        return out

    def __repr__(self):
        return "Poly(%s)" % (self.coeffs,)


def _poly_dict(space, data):
    out = {}
    for s, p in data.items():
        assert s in space, (s, space.name)
        if not isinstance(p, Poly):
            p = Poly([p]) if not isinstance(p, (list, tuple)) else Poly(p)
        if not p.is_zero():
            out[s] = p
    return out


class PathElement:
    """p(t) + q(t)·dt with polynomial coefficients per basis symbol.

    The parameter t sits in degree 0 and dt in degree −1; the
    differential extends d(t) = dt as a derivation.
    """

    def __init__(self, space, p, q):
        self.space = space
        self.p = _poly_dict(space, p)
        self.q = _poly_dict(space, q)

    @classmethod
    def constant(cls, x):
        return cls(x.space, {s: Poly([c]) for s, c in x.coeffs.items()}, {})

    def at(self, t):
        """Evaluate the polynomial part at a parameter value."""
        return Element(self.space, {s: pol(t) for s, pol in self.p.items()})

    def reverse(self):
        """The involution t ↦ 1−t (and dt ↦ −dt) exchanging endpoints."""
        return PathElement(
            self.space,
            {s: pol.compose_affine(-1, 1) for s, pol in self.p.items()},
            {s: -pol.compose_affine(-1, 1) for s, pol in self.q.items()},
        )


def _apply_map_polys(f, polys):
    """Push a {sym: Poly} dict through a LinMap, symbol-wise."""
    out = {}
    for (t, s), c in f.entries.items():
        if s in polys:
            out[t] = out.get(t, Poly()) + c * polys[s]
    return {k: v for k, v in out.items() if not v.is_zero()}


def _bracket_polys(g, n, slot_data):
    """ℓ_n over polynomial coefficients; slot_data is one {sym: Poly}
    dict per slot."""
    out = {}
    for combo in product(*[list(d.items()) for d in slot_data]):
        pol = Poly([1])
        for _, p in combo:
            pol = pol * p
        row = g.bracket_symbols(n, tuple(s for s, _ in combo))
        for t, c in row.items():
            out[t] = out.get(t, Poly()) + c * pol
    return {k: v for k, v in out.items() if not v.is_zero()}


def path_mc_residual(g, path):
    """Maurer–Cartan residual of p(t) + q(t)dt, split as (no-dt, dt)."""
    _guard(g)
    deg = g.space.deg
    res_p = _apply_map_polys(g.differential, path.p)
    res_q = _apply_map_polys(g.differential, path.q)
    for s, pol in path.p.items():
        sgn = (-1) ** (deg(s) % 2)
        dp = sgn * pol.derivative()
        if not dp.is_zero():
            res_q[s] = res_q.get(s, Poly()) + dp
    for n in range(2, g.max_arity + 1):
        scale = Fraction(1, factorial(n)) if g.mode == "symmetric" else ONE
        term = _bracket_polys(g, n, [path.p] * n)
        for t, pol in term.items():
            res_p[t] = res_p.get(t, Poly()) + scale * pol
        # one dt slot: dt is odd, so it signs past the entries after it
        for i in range(n):
            slots = [path.p] * n
            slots[i] = path.q
            for combo in product(*[list(d.items()) for d in slots]):
                pol = Poly([1])
                for _, p in combo:
                    pol = pol * p
                syms = tuple(s for s, _ in combo)
                sgn = (-1) ** (sum(deg(s) for s in syms[i + 1 :]) % 2)
                row = g.bracket_symbols(n, syms)
                for t, c in row.items():
                    res_q[t] = res_q.get(t, Poly()) + (scale * sgn * c) * pol
    res_p = {k: v for k, v in res_p.items() if not v.is_zero()}
    res_q = {k: v for k, v in res_q.items() if not v.is_zero()}
    return res_p, res_q


def is_gauge_witness(g, path, x0, x1):
    """True iff the path is Maurer–Cartan over the polynomial forms and
    evaluates to the endpoints at t = 0 and t = 1."""
    e0 = x0.element if isinstance(x0, MCElement) else x0
    e1 = x1.element if isinstance(x1, MCElement) else x1
    if path.at(0) != e0 or path.at(1) != e1:
        return False
    res_p, res_q = path_mc_residual(g, path)
    return not res_p and not res_q


def exact_difference_witness(g, x0, y):
    """Witness for x₀ ~ x₀ + d(y) in a family with zero brackets: the
    straight line p = x₀ + t·d(y) with form part (−1)^{|y|}·y."""
    e0 = x0.element if isinstance(x0, MCElement) else x0
    dy = g.differential(y)
    deg = g.space.deg
    p = {s: Poly([c]) for s, c in e0.coeffs.items()}
    for s, c in dy.coeffs.items():
        p[s] = p.get(s, Poly()) + Poly([0, c])
    q = {s: Poly([((-1) ** (deg(s) % 2)) * c]) for s, c in y.coeffs.items()}
    return PathElement(g.space, p, q)
