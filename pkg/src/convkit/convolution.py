"""Convolution bracket families on entry-maps from a conilpotent
coalgebra to an algebra, twisted by an arity-wise degree −1 morphism.

The carrier is spanned by atoms s↦t, one per (source symbol, target
symbol) pair; the differential is the two-sided commutator with the
carrier differentials, and the n-ary bracket routes the weight-n
decomposition of the source through the twisting morphism and the
algebra action.  On top of that the module provides the four legs of
the correspondence between Maurer–Cartan elements and (co)algebra
morphisms out of the twisted (co)free constructions, the two one-sided
composition actions together with their block composite, deformation
families of morphism families, the strict rectification through the
twisted cofree/free pair, and an equalizer report comparing the two
composite orders raw and after restriction along a resolution counit.

Evaluations that would cross a weight bound raise TruncationOverflow;
nothing is silently truncated.
"""

from itertools import product

from .algebras import (
    TruncationOverflow,
    bar,
    cobar,
    counit_epsilon,
    is_coalgebra_morphism,
)
from .brackets import (
    BracketFamily,
    InfMorphism,
    MCElement,
    block_cooperad,
    compose_inf,
    eval_bracket,
    family_bar,
    mc_residual,
    strict_inf,
)
from .linalg import Element, LinMap, ONE, ZERO, compose, graded_span, tensor_symbol
from .operads import IDENTITY, subscript


ARROW = "↦"


def atom_name(s, t):
    return s + ARROW + t


# the convolution family ---------------------------------------------------


class ConvolutionAlgebra:
    """Bracket family on the space of basis-entry maps C → A.

    Atoms are named s↦t and graded by deg(t) − deg(s); the filtration
    weight of an atom is the coradical stage of its source symbol.  All
    decompositions of the source are finite, so brackets above the
    deepest stage vanish identically and the family is complete.  The
    bracket sign is the Koszul cost of the entry maps passing the
    cooperad factor and the earlier source slots.
    """

    def __init__(self, alpha, C, A, max_arity=None, name=None):
        self.alpha = alpha
        self.C = C
        self.A = A
        deg_s, deg_t = C.space.deg, A.space.deg
        pairs = [(s, t) for s in C.space.symbols for t in A.space.symbols]
        names = [atom_name(s, t) for s, t in pairs]
        assert len(set(names)) == len(names), "atom name collision"
        space = graded_span(
            name or "Hom(%s,%s)" % (C.space.name, A.space.name),
            *[(atom_name(s, t), deg_t(t) - deg_s(s)) for s, t in pairs],
        )
        self.space = space
        self.atoms = {atom_name(s, t): (s, t) for s, t in pairs}
        corad = C.coradical_weights()
        weights = {a: corad[s] for a, (s, _) in self.atoms.items()}
        self.max_weight = max(corad.values())
        if max_arity is None:
            max_arity = max(self.max_weight, 2)
        self._index = {}
        self.family = BracketFamily(
            space,
            self._hom_differential(),
            self._rows,
            mode="planar",
            max_arity=max_arity,
            weights=weights,
            complete=True,
        )
        self.family.origin = self

    def _hom_differential(self):
        # ∂(e) = d_A ∘ e − (−1)^{|e|} e ∘ d_C, entry atom by entry atom
        entries = {}
        by_src = {}
        for (t, s), c in self.A.differential.entries.items():
            by_src.setdefault(s, []).append((t, c))
        deg = self.space.deg
        for a, (s, t) in self.atoms.items():
            for u, c in by_src.get(t, ()):
                key = (atom_name(s, u), a)
                entries[key] = entries.get(key, ZERO) + c
        for (s2, s1), c in self.C.differential.entries.items():
            # e supported at s2 precomposes to an entry at s1
            for t in self.A.space.symbols:
                a = atom_name(s2, t)
                sgn = -((-1) ** (deg(a) % 2))
                key = (atom_name(s1, t), a)
                entries[key] = entries.get(key, ZERO) + sgn * c
        return LinMap(self.space, self.space, entries, degree=-1)

    def _decomp_index(self, n):
        """children tuple ↦ [(source symbol, cooperad factor, coeff)]."""
        if n not in self._index:
            idx = {}
            for c in self.C.space.symbols:
                for coeff, b, children in self.C.decompose_symbol(c):
                    if len(children) == n:
                        idx.setdefault(children, []).append((c, b, coeff))
            self._index[n] = idx
        return self._index[n]

    def _rows(self, n, syms):
        if n not in self.alpha.maps or n > self.C.cooperad.max_arity:
            return {}
        pairs = [self.atoms[s] for s in syms]
        srcs = tuple(p[0] for p in pairs)
        tgts = tuple(p[1] for p in pairs)
        fdeg = [self.space.deg(s) for s in syms]
        sdeg = self.C.space.deg
        out = {}
        for c_sym, b_sym, coeff in self._decomp_index(n).get(srcs, ()):
            exp = 0
            below = self.C.cooperad.deg(b_sym)
            for j in range(n):
                exp += fdeg[j] * below
                below += sdeg(srcs[j])
            sign = (-1) ** (exp % 2)
            for p_sym, pc in self.alpha.maps[n].apply_symbol(b_sym).items():
                row = self.A.gamma_symbols(p_sym, tgts)
                for u, gc in row.items():
                    t = atom_name(c_sym, u)
                    out[t] = out.get(t, ZERO) + coeff * pc * sign * gc
        return out

    # presentation converters ------------------------------------------

    def as_linmap(self, x):
        """Entry map C → A of an atom-supported element."""
        if isinstance(x, MCElement):
            x = x.element
        if isinstance(x, dict):
            x = self.space.element(x)
        entries = {}
        for a, c in x.coeffs.items():
            s, t = self.atoms[a]
            entries[(t, s)] = entries.get((t, s), ZERO) + c
        return LinMap(self.C.space, self.A.space, entries)

    def element(self, f):
        """Atom expansion of a LinMap (dicts/Elements pass through)."""
        if isinstance(f, LinMap):
            return self.space.element(
                {atom_name(s, t): c for (t, s), c in f.entries.items()}
            )
        if isinstance(f, dict):
            return self.space.element(f)
        assert isinstance(f, Element), f
        return f

    def mc(self, f, candidate=False):
        return MCElement(self.family, self.element(f), candidate=candidate)


def build_convolution(alpha, C, A, max_arity=None, name=None):
    return ConvolutionAlgebra(alpha, C, A, max_arity=max_arity, name=name)


def _as_entry_map(x):
    if isinstance(x, LinMap):
        return x
    assert isinstance(x, MCElement), x
    origin = getattr(x.family, "origin", None)
    assert origin is not None, "element carries no atom table"
    return origin.as_linmap(x)


# correspondence with morphisms of (co)algebras ----------------------------


def mc_to_coalg_morphism(h, f, barA, check=True):
    """Coinduced morphism into the twisted cofree coalgebra: every
    decomposition of the source is pushed through the entry map
    slot-wise with Koszul redistribution signs."""
    F0 = h.as_linmap(f)
    if check:
        assert mc_residual(h.family, h.element(F0)).is_zero(), "not Maurer-Cartan"
    degC, degA = h.C.space.deg, h.A.space.deg
    entries = {}
    for c_sym in h.C.space.symbols:
        for coeff, b, children in h.C.decompose_symbol(c_sym):
            rows = [list(F0.apply_symbol(y).items()) for y in children]
            if not all(rows):
                continue
            for combo in product(*rows):
                val = coeff
                exp = 0
                below = h.C.cooperad.deg(b)
                for (t, v), y in zip(combo, children):
                    exp += (degA(t) - degC(y)) * below
                    below += degC(y)
                    val *= v
                word = tensor_symbol([b] + [t for t, _ in combo])
                assert word in barA.space, ("bar truncation too small", word)
                key = (word, c_sym)
                entries[key] = entries.get(key, ZERO) + val * ((-1) ** (exp % 2))
    F = LinMap(h.C.space, barA.space, entries)
    if check:
        gap = compose(barA.differential, F) + (-1) * compose(F, h.C.differential)
        assert gap.is_zero(), ("coinduced map is not a chain map", gap.entries)
        assert is_coalgebra_morphism(F, h.C, barA), "coinduced map not comultiplicative"
    return F


def coalg_morphism_to_mc(h, F, candidate=False):
    """Weight-one readoff of a morphism into the twisted cofree target."""
    w1 = {tensor_symbol([IDENTITY, a]): a for a in h.A.space.symbols}
    coeffs = {}
    for (word, c_sym), v in F.entries.items():
        a = w1.get(word)
        if a is None:
            continue
        key = atom_name(c_sym, a)
        coeffs[key] = coeffs.get(key, ZERO) + v
    return MCElement(h.family, h.space.element(coeffs), candidate=candidate)


def mc_to_alg_morphism(h, f, OmC, check=True):
    """Free extension out of the twisted free algebra: apply the entry
    map slot-wise, then contract with the algebra action."""
    F0 = h.as_linmap(f)
    if check:
        assert mc_residual(h.family, h.element(F0)).is_zero(), "not Maurer-Cartan"
    degC, degA = h.C.space.deg, h.A.space.deg
    op_deg = OmC.operad.deg
    entries = {}
    for sym in OmC.space.symbols:
        p_sym, cs = OmC.parts[sym]
        rows = [list(F0.apply_symbol(c).items()) for c in cs]
        if not all(rows):
            continue
        for combo in product(*rows):
            val = ONE
            exp = 0
            below = op_deg(p_sym)
            for (t, v), c in zip(combo, cs):
                exp += (degA(t) - degC(c)) * below
                below += degC(c)
                val *= v
            for u, gc in h.A.gamma_symbols(p_sym, tuple(t for t, _ in combo)).items():
                key = (u, sym)
                entries[key] = entries.get(key, ZERO) + val * gc * ((-1) ** (exp % 2))
    G = LinMap(OmC.space, h.A.space, entries)
    if check:
        _assert_resolution_chain_map(G, OmC, h.A.differential)
    return G


def alg_morphism_to_mc(h, G, candidate=False):
    """Generator restriction of a morphism out of the twisted free
    algebra."""
    w1 = {tensor_symbol([IDENTITY, c]): c for c in h.C.space.symbols}
    coeffs = {}
    for (a, word), v in G.entries.items():
        c = w1.get(word)
        if c is None:
            continue
        key = atom_name(c, a)
        coeffs[key] = coeffs.get(key, ZERO) + v
    return MCElement(h.family, h.space.element(coeffs), candidate=candidate)


def _assert_resolution_chain_map(G, Om, d_target):
    # commutation with the twisted differential, on the interior where
    # every row of it is complete
    for sym in Om.space.symbols:
        if sym in Om.overflow_symbols:
            continue
        lhs = {}
        for t, c in Om.d_apply_symbol(sym).items():
            for u, c2 in G.apply_symbol(t).items():
                lhs[u] = lhs.get(u, ZERO) + c * c2
        rhs = {}
        for t, c in G.apply_symbol(sym).items():
            for u, c2 in d_target.apply_symbol(t).items():
                rhs[u] = rhs.get(u, ZERO) + c * c2
        keys = set(lhs) | set(rhs)
        bad = {k for k in keys if lhs.get(k, ZERO) != rhs.get(k, ZERO)}
        assert not bad, ("extension is not a chain map", sym, sorted(bad))


def counit_mc(h):
    """The identity entry map as a Maurer–Cartan atom sum (target and
    source carriers must share their symbols, as on hom(B, A) with B the
    twisted cofree coalgebra on A)."""
    coeffs = {}
    for a in h.A.space.symbols:
        word = tensor_symbol([IDENTITY, a])
        assert word in h.C.space, ("carrier is not a word coalgebra on A", word)
        coeffs[atom_name(word, a)] = ONE
    return h.mc(coeffs)


# one-sided composition actions --------------------------------------------


def hom_r(h, h_target, x):
    """Postcomposition action of a morphism family out of the twisted
    cofree coalgebra on the target algebra: the n-th component sends
    f₁…f_n to x(b ⊗ f⃗(c⃗)) summed over weight-n decompositions."""
    assert h.C.space == h_target.C.space, "source coalgebras differ"
    X = _as_entry_map(x)
    cols = {}
    for (a, word), v in X.entries.items():
        cols.setdefault(word, []).append((a, v))
    degC = h.C.space.deg
    coop_deg = h.C.cooperad.deg

    def rows_for(n):
        def rows(syms):
            pairs = [h.atoms[s] for s in syms]
            srcs = tuple(p[0] for p in pairs)
            tgts = [p[1] for p in pairs]
            fdeg = [h.space.deg(s) for s in syms]
            out = {}
            for c_sym, b_sym, coeff in h._decomp_index(n).get(srcs, ()):
                exp = 0
                below = coop_deg(b_sym)
                for j in range(n):
                    exp += fdeg[j] * below
                    below += degC(srcs[j])
                word = tensor_symbol([b_sym] + tgts)
                for a, v in cols.get(word, ()):
                    t = atom_name(c_sym, a)
                    out[t] = out.get(t, ZERO) + coeff * v * ((-1) ** (exp % 2))
            return out

        return rows

    bound = h.max_weight
    maps = {n: rows_for(n) for n in range(1, bound + 1)}
    return InfMorphism(h.family, h_target.family, maps, max_arity=bound)


def hom_l(h, h_target, y, OmC):
    """Precomposition action of a morphism family into the twisted free
    algebra on the source coalgebra: the n-th component reads the
    weight-n words of y, applies f⃗ slot-wise and contracts with the
    algebra action."""
    assert h.A.space == h_target.A.space, "target algebras differ"
    Y = y if isinstance(y, LinMap) else _as_entry_map(y)
    cols = {}
    for (word, c), v in Y.entries.items():
        cols.setdefault(c, []).append((word, v))
    degC = h.C.space.deg
    op_deg = OmC.operad.deg

    def rows_for(n):
        def rows(syms):
            pairs = [h.atoms[s] for s in syms]
            srcs = tuple(p[0] for p in pairs)
            tgts = tuple(p[1] for p in pairs)
            fdeg = [h.space.deg(s) for s in syms]
            out = {}
            for c_prime in h_target.C.space.symbols:
                for word, v in cols.get(c_prime, ()):
                    p_sym, cs = OmC.parts[word]
                    if len(cs) != n or tuple(cs) != srcs:
                        continue
                    exp = 0
                    below = op_deg(p_sym)
                    for j in range(n):
                        exp += fdeg[j] * below
                        below += degC(cs[j])
                    row = h.A.gamma_symbols(p_sym, tgts)
                    for u, gc in row.items():
                        t = atom_name(c_prime, u)
                        out[t] = out.get(t, ZERO) + v * gc * ((-1) ** (exp % 2))
            return out

        return rows

    bound = OmC.W
    maps = {n: rows_for(n) for n in range(1, bound + 1)}
    return InfMorphism(h.family, h_target.family, maps, max_arity=bound)


def postcompose_atom_map(h_src, h_tgt, g):
    """Atom-space matrix of postcomposition by a carrier map of target
    algebras (entry maps share the source coalgebra)."""
    assert h_src.C.space == h_tgt.C.space, "source coalgebras differ"
    entries = {}
    for a, (s, t) in h_src.atoms.items():
        for u, c in g.apply_symbol(t).items():
            key = (atom_name(s, u), a)
            entries[key] = entries.get(key, ZERO) + c
    return LinMap(h_src.space, h_tgt.space, entries)


def precompose_atom_map(h_src, h_tgt, f):
    """Atom-space matrix of precomposition by a carrier map of source
    coalgebras (entry maps share the target algebra)."""
    assert h_src.A.space == h_tgt.A.space, "target algebras differ"
    entries = {}
    for a, (s, t) in h_src.atoms.items():
        for (s_img, s_in), c in f.entries.items():
            if s_img == s:
                key = (atom_name(s_in, t), a)
                entries[key] = entries.get(key, ZERO) + c
    return LinMap(h_src.space, h_tgt.space, entries)


def compose_action(order, corners, phi, psi, OmC):
    """Both composite orders of the two one-sided actions.

    corners maps "CA", "CAp", "CpA", "CpAp" to the four convolution
    instances; order "lr" applies the precomposition leg first, "rl"
    the postcomposition leg first.
    """
    assert order in ("lr", "rl"), order
    if order == "lr":
        first = hom_l(corners["CA"], corners["CpA"], phi, OmC)
        second = hom_r(corners["CpA"], corners["CpAp"], psi)
    else:
        first = hom_r(corners["CA"], corners["CAp"], psi)
        second = hom_l(corners["CAp"], corners["CpAp"], phi, OmC)
    return compose_inf(second, first)


# deformation families of morphism families --------------------------------


class _BlockTwisting:
    """Formal degree −1 image of each block marker, for routing the
    convolution construction over a family bar."""

    def __init__(self, coop):
        self.maps = {}
        for n in sorted(coop.collection.spaces):
            if n < 2:
                continue
            lam = "λ" + subscript(n)
            lam_space = graded_span("Λ(%d)" % n, (lam, -1))
            self.maps[n] = LinMap(
                coop.space(n),
                lam_space,
                {(lam, "blk" + subscript(n)): ONE},
                degree=-1,
            )


class _BracketAction:
    """Algebra-shaped view of a bracket family: the arity-n marker acts
    by ℓ_n (zero above the certified arity bound)."""

    def __init__(self, g):
        self.bracket_family = g
        self.space = g.space
        self.differential = g.differential

    def gamma_symbols(self, p_sym, args):
        if p_sym == IDENTITY:
            assert len(args) == 1, args
            return {args[0]: ONE}
        n = len(args)
        if n > self.bracket_family.max_arity:
            assert self.bracket_family.complete, ("arity above bound", n)
            return {}
        return self.bracket_family.bracket_symbols(n, tuple(args))


def deformation_family(g, h, W):
    """Convolution family on morphism-family data from g to h, carried
    by the weight-W bar coalgebra of g with the brackets of h acting as
    formal degree −1 operations."""
    bar_g = family_bar(g, W)
    conv = ConvolutionAlgebra(
        _BlockTwisting(block_cooperad(max(W, 2))),
        bar_g,
        _BracketAction(h),
        max_arity=min(W, h.max_arity) if h.max_arity >= 2 else 2,
        name="Def(%s→%s)|W=%d" % (g.space.name, h.space.name, W),
    )
    conv.left_family = g
    conv.right_family = h
    return conv


def inf_to_element(dg, theta, twist=False):
    """Dictionary embedding of a morphism family into the deformation
    carrier: the atom at a block word b⊗f⃗ reads off θ_{|f⃗|}(f⃗).

    twist=True multiplies each entry by the Koszul sign of the entry
    passing the slot maps, (−1)^{|entry|·(|f₁|+…+|f_n|)}; this is the
    dictionary under which the precomposition-type action is strict
    (its argument is applied after the slot maps), while the plain
    dictionary fits the postcomposition-type action.
    """
    deg_w = dg.C.space.deg
    deg_t = dg.A.space.deg
    coeffs = {}
    for word, (_, vs) in dg.C.parts.items():
        row = theta.component_symbols(len(vs), tuple(vs))
        for t, c in row.items():
            if twist:
                c = c * ((-1) ** (((deg_t(t) - deg_w(word)) * deg_w(word)) % 2))
            key = atom_name(word, t)
            coeffs[key] = coeffs.get(key, ZERO) + c
    return dg.space.element(coeffs)


def element_to_inf(dg, x, twist=False):
    """Morphism family read off a deformation-carrier element (the
    inverse dictionary; the twist sign is an involution)."""
    if isinstance(x, MCElement):
        x = x.element
    if isinstance(x, dict):
        x = dg.space.element(x)
    deg = dg.space.deg
    deg_w = dg.C.space.deg
    tables = {}
    for a, c in x.coeffs.items():
        word, t = dg.atoms[a]
        if twist:
            c = c * ((-1) ** ((deg(a) * deg_w(word)) % 2))
        _, vs = dg.C.parts[word]
        row = tables.setdefault(len(vs), {}).setdefault(tuple(vs), {})
        row[t] = row.get(t, ZERO) + c
    maps = {n: table for n, table in tables.items()}
    return InfMorphism(
        dg.left_family,
        dg.right_family,
        maps,
        max_arity=max(tables) if tables else 1,
    )


def check_strictness(h_def, act, dg, up_to_arity=2, pool=None, report=False, twist=False):
    """Entry-wise commutation of a one-sided action with the deformation
    structure: act(∂x) = ℓ₁(act x) and act(ℓ_k(x⃗)) = ℓ_k(act x⃗).

    act maps elements of h_def to morphism families embedded in dg;
    pool optionally restricts the swept atoms.  twist selects the
    embedding dictionary (see inf_to_element): plain for the
    postcomposition-type action, twisted for the precomposition type.
    """
    syms = list(pool) if pool is not None else list(h_def.space.symbols)
    violations = []
    checked = 0
    basis = {s: h_def.space.basis(s) for s in syms}
    images = {s: inf_to_element(dg, act(basis[s]), twist=twist) for s in syms}
    for s in syms:
        lhs = inf_to_element(dg, act(h_def.family.differential(basis[s])), twist=twist)
        rhs = dg.family.differential(images[s])
        checked += 1
        if lhs != rhs:
            violations.append({"arity": 1, "inputs": (s,), "lhs": lhs, "rhs": rhs})
    for k in range(2, up_to_arity + 1):
        for tup in product(syms, repeat=k):
            args = [basis[s] for s in tup]
            try:
                lhs = inf_to_element(dg, act(eval_bracket(h_def.family, k, args)), twist=twist)
                rhs = eval_bracket(dg.family, k, [images[s] for s in tup])
            except TruncationOverflow:
                continue
            checked += 1
            if lhs != rhs:
                violations.append({"arity": k, "inputs": tup, "lhs": lhs, "rhs": rhs})
    out = {"ok": not violations, "checked": checked, "violations": violations}
    return out if report else out["ok"]


# rectification through the twisted cofree/free pair -----------------------


def cobar_morphism(F, Om_src, Om_tgt, check=True):
    """Free-extension lift of a carrier-level map through the twisted
    free algebras, slot-wise with Koszul redistribution signs."""
    deg_s = Om_src.generators.deg
    deg_t = Om_tgt.generators.deg
    op_deg = Om_src.operad.deg
    entries = {}
    for sym in Om_src.space.symbols:
        p_sym, cs = Om_src.parts[sym]
        rows = [list(F.apply_symbol(c).items()) for c in cs]
        if not all(rows):
            continue
        for combo in product(*rows):
            val = ONE
            exp = 0
            below = op_deg(p_sym)
            for (t, v), c in zip(combo, cs):
                exp += (deg_t(t) - deg_s(c)) * below
                below += deg_s(c)
                val *= v
            word = tensor_symbol([p_sym] + [t for t, _ in combo])
            assert word in Om_tgt.space, ("free truncation too small", word)
            key = (word, sym)
            entries[key] = entries.get(key, ZERO) + val * ((-1) ** (exp % 2))
    R = LinMap(Om_src.space, Om_tgt.space, entries)
    if check:
        _assert_square_chain_map(R, Om_src, Om_tgt)
    return R


def _assert_square_chain_map(R, Om_src, Om_tgt, skip_report=None):
    # commutation with the twisted differentials wherever both rows are
    # complete; image words share the source weight, so the interior of
    # the source is the honest domain
    skipped = 0
    for sym in Om_src.space.symbols:
        if sym in Om_src.overflow_symbols:
            skipped += 1
            continue
        lhs = {}
        for t, c in Om_src.d_apply_symbol(sym).items():
            for u, c2 in R.apply_symbol(t).items():
                lhs[u] = lhs.get(u, ZERO) + c * c2
        rhs = {}
        try:
            for t, c in R.apply_symbol(sym).items():
                for u, c2 in Om_tgt.d_apply_symbol(t).items():
                    rhs[u] = rhs.get(u, ZERO) + c * c2
        except TruncationOverflow:
            skipped += 1
            continue
        keys = set(lhs) | set(rhs)
        bad = {k for k in keys if lhs.get(k, ZERO) != rhs.get(k, ZERO)}
        assert not bad, ("lift is not a chain map", sym, sorted(bad))
    if skip_report is not None:
        skip_report.append(skipped)


def rectify(h_def, psi, bar_target, Om_src, Om_tgt, check=True):
    """Strict replacement of a morphism family: coinduce into the
    twisted cofree coalgebra, then free-extend through the twisted free
    algebras on both sides."""
    F_hat = mc_to_coalg_morphism(h_def, psi, bar_target, check=check)
    return cobar_morphism(F_hat, Om_src, Om_tgt, check=check)


# equalizer report ----------------------------------------------------------


def _first_difference(t1, t2, pool, up_to_arity):
    for n in range(1, up_to_arity + 1):
        for syms in product(pool, repeat=n):
            try:
                r1 = t1.component_symbols(n, syms)
                r2 = t2.component_symbols(n, syms)
            except TruncationOverflow:
                continue
            if r1 != r2:
                return {"arity": n, "inputs": syms, "lhs": r1, "rhs": r2}
    return None


def compose_rectified(order, res_corners, phi, rpsi, OmC):
    """Both composite orders through the resolution corners, with the
    postcomposition leg replaced by its strict rectification (a plain
    algebra morphism between the resolutions)."""
    assert order in ("lr", "rl"), order
    if order == "lr":
        first = hom_l(res_corners["CA"], res_corners["CpA"], phi, OmC)
        second = strict_inf(
            res_corners["CpA"].family,
            res_corners["CpAp"].family,
            postcompose_atom_map(res_corners["CpA"], res_corners["CpAp"], rpsi),
        )
    else:
        first = strict_inf(
            res_corners["CA"].family,
            res_corners["CAp"].family,
            postcompose_atom_map(res_corners["CA"], res_corners["CAp"], rpsi),
        )
        second = hom_l(res_corners["CAp"], res_corners["CpAp"], phi, OmC)
    return compose_inf(second, first)


def equalizer_check(
    corners,
    phi,
    psi,
    OmC,
    resolution=None,
    eps=None,
    res_corners=None,
    rpsi=None,
    up_to_arity=2,
    max_weight=None,
):
    """Compare the two composite orders entry-wise.

    Raw comparison sweeps atom tuples of the starting corner.  When a
    resolution corner (entry maps into the twisted free-on-cofree
    algebra) and its counit are supplied, the composites are also
    compared after restriction along the induced strict family map,
    inputs filtered to atoms whose resolution word stays within
    max_weight.  When the resolution corners and the rectified
    postcomposition morphism are supplied as well, the two orders are
    additionally compared with the strict rectification in place of the
    original datum (the square that genuinely commutes).  Returns a
    report dict; nothing is asserted.
    """
    T_lr = compose_action("lr", corners, phi, psi, OmC)
    T_rl = compose_action("rl", corners, phi, psi, OmC)
    h0 = corners["CA"]
    report = {
        "raw_equal": None,
        "raw_difference": None,
        "restricted_equal": None,
        "restricted_difference": None,
        "rectified_equal": None,
        "rectified_difference": None,
    }
    diff = _first_difference(T_lr, T_rl, list(h0.space.symbols), up_to_arity)
    report["raw_equal"] = diff is None
    report["raw_difference"] = diff
    if resolution is not None:
        E = strict_inf(
            resolution.family,
            h0.family,
            postcompose_atom_map(resolution, h0, eps),
        )
        pool = _interior_atoms(resolution, max_weight)
        diff = _first_difference(
            compose_inf(T_lr, E), compose_inf(T_rl, E), pool, up_to_arity
        )
        report["restricted_equal"] = diff is None
        report["restricted_difference"] = diff
    if res_corners is not None and rpsi is not None:
        S_lr = compose_rectified("lr", res_corners, phi, rpsi, OmC)
        S_rl = compose_rectified("rl", res_corners, phi, rpsi, OmC)
        pool = _interior_atoms(res_corners["CA"], max_weight)
        diff = _first_difference(S_lr, S_rl, pool, up_to_arity)
        report["rectified_equal"] = diff is None
        report["rectified_difference"] = diff
    return report


def _interior_atoms(h, max_weight):
    pool = list(h.space.symbols)
    if max_weight is not None:
        wt = h.A.weights
        pool = [a for a in pool if wt[h.atoms[a][1]] <= max_weight]
    return pool


# resolution-shaped target algebras -----------------------------------------


def interior_differential_map(R):
    """Total twisted differential of a free resolution as a linear map,
    rows outside the interior omitted (they would cross the weight
    bound; evaluations touching them must be restricted accordingly)."""
    entries = {}
    for sym in R.space.symbols:
        if sym in R.overflow_symbols:
            continue
        for t, c in R.d_rows[sym].items():
            entries[(t, sym)] = c
    return LinMap(R.space, R.space, entries, degree=-1)


class ResolutionView:
    """Algebra-shaped view of a twisted free algebra whose differential
    rows are restricted to the interior, so it can serve as the target
    of a convolution instance."""

    def __init__(self, R):
        self.resolution = R
        self.operad = R.operad
        self.space = R.space
        self.weights = R.weights
        self.max_weight = R.W
        self.differential = interior_differential_map(R)

    def gamma_symbols(self, p_sym, args):
        return self.resolution.gamma_symbols(p_sym, args)


def two_sided_resolution(alpha, A, W, check=True):
    """Twisted free algebra on the twisted cofree coalgebra of a
    carrier, with its projection-extension counit.  Truncated by total
    bar weight (the coradical filtration), under which the whole
    differential is interior."""
    B = bar(alpha, A, W, check=False)
    R = cobar(alpha, B, W, check=check, by_carrier_weight=True)
    eps = counit_epsilon(alpha, A, W, RA=R)
    return R, eps
