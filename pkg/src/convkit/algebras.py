"""Algebras over an operad, conilpotent coalgebras over a cooperad,
free/cofree constructions with weight truncation, twisted bar/cobar
differentials, and the counit of the resulting adjunction.

Weight means the number of carrier tensor slots, except where a free
construction is told to count the carrier's own weights instead (the
coradical filtration; see cobar's by_carrier_weight).  Truncation is
never silent: evaluations that would cross the weight bound raise
TruncationOverflow, and squared-differential checks on cobar-type
objects are restricted to the interior where every intermediate value
is representable.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .linalg import (
    Element,
    GradedSpace,
    LinMap,
    ONE,
    ZERO,
    compose,
    graded_span,
    is_chain_map,
    rat,
    tensor_symbol,
    zero_map,
)
from .operads import IDENTITY


class TruncationOverflow(Exception):
    """An evaluation left the retained weight range."""


@dataclass(frozen=True)
class WeightTruncation:
    W: int

    def __post_init__(self):
        assert self.W >= 1, ("weight bound must be positive", self.W)


def _bound(W):
    return W.W if isinstance(W, WeightTruncation) else int(W)


# algebras ---------------------------------------------------------------


class Algebra:
    """Operad algebra with sparse structure-constant action tables."""

    def __init__(
        self,
        operad,
        space,
        action,
        differential=None,
        weights=None,
        max_weight=None,
        check=True,
    ):
        # action: dict (p_sym, arg_syms tuple) -> {out_sym: coeff};
        # identity rows γ(id; a) = a are implicit and must not be stored
        self.operad = operad
        self.space = space
        self.action = {}
        for (p, args), row in action.items():
            assert p != IDENTITY, "identity action is implicit"
            cleaned = {t: rat(c) for t, c in row.items() if rat(c)}
            self.action[(p, tuple(args))] = cleaned
        self.differential = differential or zero_map(space, space, degree=-1)
        self.weights = weights
        self.max_weight = max_weight
        if check:
            check_algebra_axioms(self)

    def gamma_symbols(self, p_sym, arg_syms):
        """Structure constants of γ(p; a₁…a_n) as a sparse dict."""
        if p_sym == IDENTITY:
            assert len(arg_syms) == 1, arg_syms
            return {arg_syms[0]: ONE}
        return dict(self.action.get((p_sym, tuple(arg_syms)), {}))

    def gamma_eval(self, p, args):
        """Multilinear evaluation of an operad Element on carrier Elements."""
        if isinstance(p, str):
            p = self.operad.space(self.operad.arity_of(p)).basis(p)
        n = p.space.arity
        assert len(args) == n, ("arity mismatch", n, len(args))
        out = {}
        for p_sym, pc in p.coeffs.items():
            for combo in product(*[list(a.coeffs.items()) for a in args]):
                coeff = pc
                for _, c in combo:
                    coeff *= c
                row = self.gamma_symbols(p_sym, tuple(s for s, _ in combo))
                for t, c2 in row.items():
                    out[t] = out.get(t, ZERO) + coeff * c2
        return Element(self.space, out)


def gamma_eval(A, p, args):
    return A.gamma_eval(p, args)


def _try_gamma(A, p_sym, arg_syms):
    try:
        return A.gamma_symbols(p_sym, arg_syms)
    except TruncationOverflow:
        return None


def check_algebra_axioms(A, sample=None):
    """γ respects ∘_i with Koszul signs, and d is a derivation over γ."""
    op = A.operad
    syms = A.space.symbols
    deg = A.space.deg
    for (p, i, q), _row in op.comp.items():
        a, b = op.arity_of(p), op.arity_of(q)
        n = a + b - 1
        pool = sample(n) if sample else [tuple(t) for t in product(syms, repeat=n)]
        for args in pool:
            lhs = {}
            bad = False
            for s, c in op.compose_symbols(p, i, q).items():
                row = _try_gamma(A, s, args)
                if row is None:
                    bad = True
                    break
                for t, c2 in row.items():
                    lhs[t] = lhs.get(t, ZERO) + c * c2
            inner = _try_gamma(A, q, args[i - 1 : i - 1 + b])
            if bad or inner is None:
                continue
            sign = (-1) ** ((op.deg(q) * sum(deg(s) for s in args[: i - 1])) % 2)
            rhs = {}
            overflow = False
            for mid, c in inner.items():
                outer_args = args[: i - 1] + (mid,) + args[i - 1 + b :]
                row = _try_gamma(A, p, outer_args)
                if row is None:
                    overflow = True
                    break
                for t, c2 in row.items():
                    rhs[t] = rhs.get(t, ZERO) + sign * c * c2
            if overflow:
                continue
            keys = set(lhs) | set(rhs)
            assert all(lhs.get(k, ZERO) == rhs.get(k, ZERO) for k in keys), (
                "action not compatible with operad composition",
                p,
                i,
                q,
                args,
            )
    _check_algebra_derivation(A, sample=sample)


def _check_algebra_derivation(A, sample=None):
    # d(γ(p; a⃗)) = γ(dp; a⃗) + Σ_i (−1)^{|p|+|a₁…a_{i−1}|} γ(p; … da_i …),
    # swept over all argument tuples so vanishing products are constrained too
    if A.differential.is_zero() and all(
        d.is_zero() for d in A.operad.differentials.values()
    ):
        return
    op, deg = A.operad, A.space.deg
    syms = A.space.symbols
    for n in sorted(op.collection.spaces):
        if n < 2:
            continue
        pool = sample(n) if sample else [tuple(t) for t in product(syms, repeat=n)]
        for p in op.collection.symbols(n):
            for args in pool:
                row = _try_gamma(A, p, args)
                if row is None:
                    continue
                lhs = {}
                for t, c in row.items():
                    for t2, c2 in A.differential.apply_symbol(t).items():
                        lhs[t2] = lhs.get(t2, ZERO) + c * c2
                rhs = {}
                overflow = False
                for dp, c in op.differentials[n].apply_symbol(p).items():
                    drow = _try_gamma(A, dp, args)
                    if drow is None:
                        overflow = True
                        break
                    for t, c2 in drow.items():
                        rhs[t] = rhs.get(t, ZERO) + c * c2
                below = op.deg(p)
                for i, s in enumerate(args):
                    if overflow:
                        break
                    sgn = (-1) ** (below % 2)
                    for ds, c in A.differential.apply_symbol(s).items():
                        drow = _try_gamma(A, p, args[:i] + (ds,) + args[i + 1 :])
                        if drow is None:
                            overflow = True
                            break
                        for t, c2 in drow.items():
                            rhs[t] = rhs.get(t, ZERO) + sgn * c * c2
                    below += deg(s)
                if overflow:
                    continue
                keys = set(lhs) | set(rhs)
                assert all(lhs.get(k, ZERO) == rhs.get(k, ZERO) for k in keys), (
                    "differential is not a derivation",
                    p,
                    args,
                )


# coalgebras -------------------------------------------------------------


class Coalgebra:
    """Conilpotent cooperad coalgebra, decomposition listed per basis element."""

    def __init__(
        self,
        cooperad,
        space,
        delta,
        differential=None,
        weights=None,
        max_weight=None,
        check=True,
    ):
        # delta: dict c_sym -> {(b_sym, children tuple): coeff}, parts of
        # weight ≥ 2 only; the weight-1 part id⊗c is implicit
        self.cooperad = cooperad
        self.space = space
        self.delta = {}
        for c_sym, row in delta.items():
            cleaned = {}
            for (b, children), coeff in row.items():
                coeff = rat(coeff)
                if not coeff:
                    continue
                assert len(children) >= 2 and b != IDENTITY, (
                    "weight-1 decomposition is implicit",
                    c_sym,
                )
                assert cooperad.arity_of(b) == len(children), (c_sym, b, children)
                cleaned[(b, tuple(children))] = coeff
            if cleaned:
                self.delta[c_sym] = cleaned
        self.differential = differential or zero_map(space, space, degree=-1)
        self.weights = weights
        self.max_weight = max_weight
        if check:
            check_coalgebra_axioms(self)

    def decompose_symbol(self, sym):
        """All (coeff, b_sym, children) of Δ(sym), weight-1 term included."""
        out = [(ONE, IDENTITY, (sym,))]
        for (b, children), coeff in self.delta.get(sym, {}).items():
            out.append((coeff, b, children))
        return out

    def delta_n(self, n, c):
        """Weight-n component of the decomposition of an Element, sparse."""
        assert n >= 1, n
        assert n <= self.cooperad.max_arity, ("arity above bound", n)
        if isinstance(c, str):
            c = self.space.basis(c)
        out = {}
        for sym, v in c.coeffs.items():
            for coeff, b, children in self.decompose_symbol(sym):
                if len(children) == n:
                    key = (b, children)
                    out[key] = out.get(key, ZERO) + v * coeff
        return {k: v for k, v in out.items() if v}

    def coradical_weights(self):
        """Minimal filtration stage per basis symbol; errors on cycles."""
        memo, active = {}, set()

        def stage(sym):
            if sym in memo:
                return memo[sym]
            assert sym not in active, ("decomposition does not terminate", sym)
            active.add(sym)
            best = 1
            for (b, children), _ in self.delta.get(sym, {}).items():
                best = max(best, sum(stage(ch) for ch in children))
            active.discard(sym)
            memo[sym] = best
            return best

        return {sym: stage(sym) for sym in self.space.symbols}


def delta_n(C, n, c):
    return C.delta_n(n, c)


def check_coalgebra_axioms(C):
    """Degree-0 decomposition rows, coassociativity, coderivation, conilpotence."""
    coop, deg = C.cooperad, C.space.deg
    for c_sym, row in C.delta.items():
        for (b, children), _ in row.items():
            got = coop.deg(b) + sum(deg(ch) for ch in children)
            assert got == deg(c_sym), ("decomposition not degree 0", c_sym, b, children)
    for c_sym in C.space.symbols:
        lhs = _expand_outer(C, c_sym)
        rhs = _expand_inner(C, c_sym)
        keys = set(lhs) | set(rhs)
        bad = [k for k in keys if lhs.get(k, ZERO) != rhs.get(k, ZERO)]
        assert not bad, ("coassociativity fails", c_sym, bad[:3])
    _check_coderivation_on_carrier(C)
    weights = C.coradical_weights()  # raises on non-conilpotent input
    if C.max_weight is not None:
        assert max(weights.values()) <= C.max_weight, (weights, C.max_weight)


def _expand_outer(C, c_sym):
    # (Δ_𝒞 ∘ 1) Δ: decompose the cooperad factor, then redistribute the
    # carriers into blocks, each inner symbol moving right past the blocks
    # before it
    deg = C.space.deg
    out = {}
    for s1, b, xs in C.decompose_symbol(c_sym):
        k = len(xs)
        for k0 in range(1, k + 1):
            for s2, b0, inner in C.cooperad.full_decompose(b, k0):
                exp = 0
                pos = 0
                below = 0
                for j, bj in enumerate(inner):
                    a = C.cooperad.arity_of(bj)
                    if j > 0:
                        exp += C.cooperad.deg(bj) * below
                    below += sum(deg(x) for x in xs[pos : pos + a])
                    pos += a
                key = (b0, inner, xs)
                val = s1 * s2 * ((-1) ** (exp % 2))
                out[key] = out.get(key, ZERO) + val
    return {k: v for k, v in out.items() if v}


def _expand_inner(C, c_sym):
    # (1 ∘ Δ) Δ: decompose each carrier in place.  Decomposition rows are
    # degree 0, so plugging them in slotwise needs no Koszul signs; the
    # result is already in the interleaved normal form that _expand_outer
    # converts into.
    out = {}
    for s1, b0, ys in C.decompose_symbol(c_sym):
        expansions = [C.decompose_symbol(y) for y in ys]
        for combo in product(*expansions):
            coeff = s1
            inner = []
            zs = []
            for t, bj, zj in combo:
                coeff *= t
                inner.append(bj)
                zs.extend(zj)
            key = (b0, tuple(inner), tuple(zs))
            out[key] = out.get(key, ZERO) + coeff
    return {k: v for k, v in out.items() if v}


def _check_coderivation_on_carrier(C):
    # Δ(dc) = Σ over Δ(c): d hits the cooperad factor, then each carrier
    d = C.differential
    if d.is_zero() and all(m.is_zero() for m in C.cooperad.differentials.values()):
        return
    deg = C.space.deg
    for c_sym in C.space.symbols:
        lhs = {}
        for dc, v in d.apply_symbol(c_sym).items():
            for coeff, b, children in C.decompose_symbol(dc):
                key = (b, children)
                lhs[key] = lhs.get(key, ZERO) + v * coeff
        rhs = {}
        for coeff, b, children in C.decompose_symbol(c_sym):
            a = len(children)
            for db, v in C.cooperad.differentials[a].apply_symbol(b).items():
                key = (db, children)
                rhs[key] = rhs.get(key, ZERO) + coeff * v
            below = C.cooperad.deg(b)
            for i, ch in enumerate(children):
                sgn = (-1) ** (below % 2)
                for dch, v in d.apply_symbol(ch).items():
                    key = (b, children[:i] + (dch,) + children[i + 1 :])
                    rhs[key] = rhs.get(key, ZERO) + sgn * coeff * v
                below += deg(ch)
        keys = set(lhs) | set(rhs)
        assert all(lhs.get(k, ZERO) == rhs.get(k, ZERO) for k in keys), (
            "coderivation fails",
            c_sym,
        )


# free and cofree constructions ------------------------------------------


def _word_basis(collection, gens, W, gen_weights=None):
    """Symbols (op_sym, gen_tuple) for weights 1…W, with degrees.  A word
    weighs its slot count, or the sum of gen_weights over its slots when
    that table is given."""
    words = []
    for n in sorted(collection.spaces):
        if n > W:
            continue
        for s in collection.symbols(n):
            if n > 1 and s == IDENTITY:
                continue
            for vs in product(gens.symbols, repeat=n):
                wt = n if gen_weights is None else sum(gen_weights[v] for v in vs)
                if wt > W:
                    continue
                sym = tensor_symbol([s] + list(vs))
                d = collection.deg(s) + sum(gens.deg(v) for v in vs)
                words.append((sym, d, s, tuple(vs), wt))
    return words


class FreeAlgebra(Algebra):
    """Free operad algebra on a generator space, truncated by slot count
    (or by total generator weight when gen_weights is given)."""

    def __init__(
        self, operad, generators, W, gen_differential=None, check=True, gen_weights=None
    ):
        W = _bound(W)
        words = _word_basis(operad.collection, generators, W, gen_weights=gen_weights)
        names = [w[0] for w in words]
        assert len(set(names)) == len(names), "free-algebra symbol collision"
        space = graded_span(
            "%s(%s)|W=%d" % (operad.name, generators.name, W),
            *[(sym, d) for sym, d, _, _, _ in words],
        )
        self.parts = {sym: (s, vs) for sym, _, s, vs, _ in words}
        weights = {sym: n for sym, _, _, _, n in words}
        self.generators = generators
        self.W = W
        d_entries = {}
        gd = gen_differential or zero_map(generators, generators, degree=-1)
        for sym, _, s, vs, n in words:
            # d(p⊗v⃗) = d_𝒫(p)⊗v⃗ + Σ_i ±p⊗…d(v_i)…
            for dp, c in operad.differentials[n].apply_symbol(s).items():
                d_entries[(tensor_symbol([dp] + list(vs)), sym)] = (
                    d_entries.get((tensor_symbol([dp] + list(vs)), sym), ZERO) + c
                )
            below = operad.deg(s)
            for i, v in enumerate(vs):
                sgn = (-1) ** (below % 2)
                for dv, c in gd.apply_symbol(v).items():
                    t = tensor_symbol([s] + list(vs[:i]) + [dv] + list(vs[i + 1 :]))
                    d_entries[(t, sym)] = d_entries.get((t, sym), ZERO) + sgn * c
                below += generators.deg(v)
        diff = LinMap(space, space, d_entries, degree=-1)
        assert compose(diff, diff).is_zero(), "free-algebra differential d² ≠ 0"
        super().__init__(
            operad,
            space,
            {},
            differential=diff,
            weights=weights,
            max_weight=W,
            check=False,
        )
        self._gamma_memo = {}
        if check:
            check_algebra_axioms(self)

    def gamma_symbols(self, p_sym, arg_syms):
        if p_sym == IDENTITY:
            assert len(arg_syms) == 1
            return {arg_syms[0]: ONE}
        key = (p_sym, tuple(arg_syms))
        if key in self._gamma_memo:
            return dict(self._gamma_memo[key])
        total = sum(self.weights[a] for a in arg_syms)
        if total > self.W:
            raise TruncationOverflow((p_sym, arg_syms, total, self.W))
        # γ(p; q₁⊗v⃗₁, …) = ± γ_𝒫(p; q⃗) ⊗ v⃗₁…v⃗_k, each operad factor q_j
        # moving left past the earlier generator blocks
        qs, blocks = [], []
        exp = 0
        below = 0
        for a in arg_syms:
            q, vs = self.parts[a]
            exp += self.operad.deg(q) * below
            below += sum(self.generators.deg(v) for v in vs)
            qs.append(q)
            blocks.extend(vs)
        sign = (-1) ** (exp % 2)
        out = {}
        for t, c in self.operad.gamma_symbols(p_sym, tuple(qs)).items():
            out[tensor_symbol([t] + blocks)] = sign * c
        self._gamma_memo[key] = out
        return dict(out)


def free_algebra(P, generators, W, gen_differential=None, check=True):
    return FreeAlgebra(P, generators, W, gen_differential, check=check)


def cofree_coalgebra(Cc, cogenerators, W, cogen_differential=None, check=False):
    """Cofree conilpotent coalgebra on a cogenerator space, slot-truncated.

    Coassociativity holds by construction (it is the cooperad axiom routed
    through the word basis), so the eager checker is off by default; pass
    check=True on small instances to run it anyway.
    """
    W = _bound(W)
    words = _word_basis(Cc.collection, cogenerators, W)
    names = [w[0] for w in words]
    assert len(set(names)) == len(names), "cofree-coalgebra symbol collision"
    space = graded_span(
        "%s(%s)|W=%d" % (Cc.name, cogenerators.name, W),
        *[(sym, d) for sym, d, _, _, _ in words],
    )
    weights = {sym: n for sym, _, _, _, n in words}
    delta = {}
    deg = cogenerators.deg
    for sym, _, c0, vs, n in words:
        row = {}
        for k in range(2, n + 1):
            for s, b, inner in Cc.full_decompose(c0, k):
                # split the cogenerator word into blocks, each inner symbol
                # moving right past the blocks before it
                exp = 0
                pos = 0
                below = 0
                children = []
                for j, cj in enumerate(inner):
                    a = Cc.arity_of(cj)
                    if j > 0:
                        exp += Cc.deg(cj) * below
                    block = vs[pos : pos + a]
                    below += sum(deg(v) for v in block)
                    pos += a
                    children.append(tensor_symbol([cj] + list(block)))
                key = (b, tuple(children))
                row[key] = row.get(key, ZERO) + s * ((-1) ** (exp % 2))
        if row:
            delta[sym] = row
    d_entries = {}
    cd = cogen_differential or zero_map(cogenerators, cogenerators, degree=-1)
    for sym, _, c0, vs, n in words:
        for dc, c in Cc.differentials[n].apply_symbol(c0).items():
            t = tensor_symbol([dc] + list(vs))
            d_entries[(t, sym)] = d_entries.get((t, sym), ZERO) + c
        below = Cc.deg(c0)
        for i, v in enumerate(vs):
            sgn = (-1) ** (below % 2)
            for dv, c in cd.apply_symbol(v).items():
                t = tensor_symbol([c0] + list(vs[:i]) + [dv] + list(vs[i + 1 :]))
                d_entries[(t, sym)] = d_entries.get((t, sym), ZERO) + sgn * c
            below += deg(v)
    diff = LinMap(space, space, d_entries, degree=-1)
    assert compose(diff, diff).is_zero(), "cofree differential d² ≠ 0"
    return Coalgebra(
        Cc,
        space,
        delta,
        differential=diff,
        weights=weights,
        max_weight=W,
        check=check,
    )


# bar and cobar ----------------------------------------------------------


def bar(alpha, A, W, check=False):
    """Twisted cofree coalgebra on the carrier of an algebra.

    The differential is the cofree coderivation of d_A plus the twist
    term: one-step decomposition of the cooperad factor, α applied to
    the inner piece, then the algebra action contracts it with the
    adjacent carrier block.  The twist never raises weight, so the
    truncation is an honest quotient complex and d² = 0 is asserted.
    """
    coop, op = alpha.source, alpha.target
    base = cofree_coalgebra(
        coop, A.space, W, cogen_differential=A.differential, check=False
    )
    d2_entries = {}
    deg = A.space.deg
    for sym in base.space.symbols:
        c0, vs = _split_word(base, sym)
        m = len(vs)
        for s, left, i, right in coop.decompose_symbol(c0):
            ra = coop.arity_of(right)
            if ra not in alpha.maps:
                continue
            val = alpha.maps[ra].apply_symbol(right)
            if not val:
                continue
            # α crosses the left factor while the decomposition is still
            # grouped, then its image rides into the slot, crossing the
            # carriers before the block
            sgn_left = (-1) ** (coop.deg(left) % 2)
            below = sum(deg(v) for v in vs[: i - 1])
            block = vs[i - 1 : i - 1 + ra]
            for p_sym, pc in val.items():
                sgn_pass = (-1) ** ((op.deg(p_sym) * below) % 2)
                inner = A.gamma_symbols(p_sym, tuple(block))
                for a_out, ac in inner.items():
                    t = tensor_symbol(
                        [left] + list(vs[: i - 1]) + [a_out] + list(vs[i - 1 + ra :])
                    )
                    key = (t, sym)
                    d2_entries[key] = (
                        d2_entries.get(key, ZERO) + s * sgn_left * sgn_pass * pc * ac
                    )
    d2 = LinMap(base.space, base.space, d2_entries, degree=-1)
    diff = base.differential + d2
    assert compose(diff, diff).is_zero(), "bar differential d² ≠ 0"
    return Coalgebra(
        coop,
        base.space,
        base.delta,
        differential=diff,
        weights=base.weights,
        max_weight=base.max_weight,
        check=check,
    )


def _split_word(carrier, sym):
    """Recover (op_or_coop_sym, gen_tuple) from a word-basis carrier."""
    if hasattr(carrier, "parts"):
        return carrier.parts[sym]
    if not hasattr(carrier, "_parts"):
        carrier._parts = {}
        for s in carrier.space.symbols:
            head, rest = _parse_word(s)
            carrier._parts[s] = (head, rest)
    return carrier._parts[sym]


def _parse_word(sym):
    parts = []
    depth = 0
    cur = []
    for ch in sym:
        if ch == "⊗" and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    parts.append("".join(cur))
    strip = [p[1:-1] if p.startswith("(") and p.endswith(")") else p for p in parts]
    return strip[0], tuple(strip[1:])


class CobarAlgebra(FreeAlgebra):
    """Free algebra on a coalgebra carrier with the twisted differential.

    The twist inserts the coalgebra decomposition through α, which raises
    the slot count; rows that would cross the weight bound are recorded in
    overflow_symbols and make the differential raise on those inputs.
    by_carrier_weight=True truncates by the carrier's coradical weights
    instead of slot count — the twist preserves that filtration, so every
    differential row stays inside the bound.
    """

    def __init__(self, alpha, C, W, check=True, by_carrier_weight=False):
        op = alpha.target
        super().__init__(
            op,
            C.space,
            W,
            gen_differential=C.differential,
            check=False,
            gen_weights=C.weights if by_carrier_weight else None,
        )
        self.coalgebra = C
        self.alpha = alpha
        max_raise = max(
            [op.arity_of(s) - 1 for n, m in alpha.maps.items() for (s, _) in m.entries]
            or [0]
        )
        if by_carrier_weight:
            max_raise = 0
        self.max_raise = max_raise
        self.interior_weight = self.W - max_raise
        rows, overflow = {}, set()
        for sym in self.space.symbols:
            row, ok = self._d_row(sym)
            rows[sym] = row
            if not ok:
                overflow.add(sym)
        self.d_rows = rows
        self.overflow_symbols = overflow
        # the inherited total map is only the untwisted part; keep it under
        # a private name so nothing mistakes it for the full differential
        self.d1 = self.differential
        self.differential = None
        if check:
            self._check_interior_square()

    def _generator_twist(self, c_sym):
        """d₂ on a generator: Σ over the decomposition, α on the cooperad
        factor, landing in words of higher slot count.  Returns (terms,
        within_bound)."""
        C, op = self.coalgebra, self.operad
        terms = {}
        ok = True
        for coeff, b, children in C.decompose_symbol(c_sym):
            k = len(children)
            if k < 2:
                continue
            if k not in self.alpha.maps:
                continue
            for p_sym, pc in self.alpha.maps[k].apply_symbol(b).items():
                if k > self.W:
                    ok = False
                    continue
                t = tensor_symbol([p_sym] + list(children))
                terms[t] = terms.get(t, ZERO) + coeff * pc
        return terms, ok

    def _d_row(self, sym):
        """Full differential row: inherited d₁ plus the derivation
        extension of the generator twist.  Second value is False when a
        twist term crossed the bound."""
        p_sym, cs = self.parts[sym]
        row = {t: c for t, c in self.differential.apply_symbol(sym).items()}
        ok = True
        op, C = self.operad, self.coalgebra
        below = op.deg(p_sym)
        for i, c_sym in enumerate(cs):
            sgn = (-1) ** (below % 2)
            twist, t_ok = self._generator_twist(c_sym)
            for ins_sym, c in twist.items():
                q, ws = self.parts[ins_sym]
                new_weight = len(cs) - 1 + len(ws)
                if new_weight > self.W:
                    ok = False
                    continue
                # splice the inserted word into slot i of the ambient word
                exp = 0
                left_deg = sum(C.space.deg(z) for z in cs[:i])
                exp += op.deg(q) * left_deg
                sign = (-1) ** (exp % 2)
                # the twist enters with the opposite sign to the bar twist;
                # this is what makes the projection-extension counit a chain
                # map and the generator chain condition the MC equation
                for t2, c2 in op.compose_symbols(p_sym, i + 1, q).items():
                    t = tensor_symbol([t2] + list(cs[:i]) + list(ws) + list(cs[i + 1 :]))
                    row[t] = row.get(t, ZERO) - sgn * sign * c * c2
            ok = ok and t_ok
            below += C.space.deg(c_sym)
        return {t: c for t, c in row.items() if c}, ok

    def d_apply_symbol(self, sym):
        if sym in self.overflow_symbols:
            raise TruncationOverflow(("differential crosses weight bound", sym))
        return dict(self.d_rows[sym])

    def d_apply(self, x):
        out = {}
        for sym, v in x.coeffs.items():
            for t, c in self.d_apply_symbol(sym).items():
                out[t] = out.get(t, ZERO) + v * c
        return Element(self.space, out)

    def _check_interior_square(self):
        # for interior start symbols every representable component of d² is
        # computed from complete rows, so all of them must vanish
        for sym in self.space.symbols:
            if self.weights[sym] > self.interior_weight:
                continue
            acc = {}
            for t, c in self.d_rows[sym].items():
                for t2, c2 in self.d_rows[t].items():
                    acc[t2] = acc.get(t2, ZERO) + c * c2
            bad = {t: c for t, c in acc.items() if c}
            assert not bad, ("cobar d² ≠ 0 on interior", sym, bad)


def cobar(alpha, C, W, check=True, by_carrier_weight=False):
    return CobarAlgebra(
        alpha, C, _bound(W), check=check, by_carrier_weight=by_carrier_weight
    )


def counit_epsilon(alpha, A, W, RA=None):
    """Canonical projection-extension morphism from the twice-twisted free
    resolution back to the algebra: kill every word with a slot of weight
    ≥ 2, apply the action to the weight-1 slots."""
    W = _bound(W)
    if RA is None:
        RA = cobar(alpha, bar(alpha, A, W, check=False), W, check=False)
    barC = RA.coalgebra
    entries = {}
    for sym in RA.space.symbols:
        p_sym, cs = RA.parts[sym]
        args = []
        for c in cs:
            if barC.weights[c] != 1:
                args = None
                break
            head, rest = _split_word(barC, c)
            assert head == IDENTITY and len(rest) == 1, (c, head, rest)
            args.append(rest[0])
        if args is None:
            continue
        for t, c in A.gamma_symbols(p_sym, tuple(args)).items():
            entries[(t, sym)] = entries.get((t, sym), ZERO) + c
    return LinMap(RA.space, A.space, entries, degree=0)


# morphism checks --------------------------------------------------------


def is_coalgebra_morphism(F, C, D, report=False):
    """Comultiplicativity of a (possibly non-homogeneous) linear map:
    decomposing the image equals pushing the decomposition through F
    slotwise with Koszul signs."""
    bad = []
    for c_sym in C.space.symbols:
        lhs = {}
        for t, v in F.apply_symbol(c_sym).items():
            for coeff, b, children in D.decompose_symbol(t):
                key = (b, children)
                lhs[key] = lhs.get(key, ZERO) + v * coeff
        rhs = {}
        for coeff, b, ys in C.decompose_symbol(c_sym):
            rows = [list(F.apply_symbol(y).items()) for y in ys]
            if not all(rows):
                continue
            for combo in product(*rows):
                val = coeff
                exp = 0
                below = C.cooperad.deg(b)
                for (t, v), y in zip(combo, ys):
                    entry_deg = D.space.deg(t) - C.space.deg(y)
                    exp += entry_deg * below
                    below += C.space.deg(y)
                    val *= v
                key = (b, tuple(t for t, _ in combo))
                rhs[key] = rhs.get(key, ZERO) + val * ((-1) ** (exp % 2))
        keys = set(lhs) | set(rhs)
        for k in keys:
            if lhs.get(k, ZERO) != rhs.get(k, ZERO):
                bad.append((c_sym, k, lhs.get(k, ZERO), rhs.get(k, ZERO)))
    ok = not bad
    if report:
        return ok, bad
    return ok


def is_algebra_morphism(G, A, B, report=False, sample=None):
    """G(γ_A(p; a⃗)) = ± γ_B(p; G(a⃗)) over all arities up to the bound,
    skipping argument tuples whose evaluation crosses a weight bound on
    both sides alike.  `sample(n)` may supply the argument pool per arity
    for carriers too large to sweep exhaustively."""
    op = A.operad
    bad = []
    arities = [
        n for n in op.collection.spaces if n >= 2 and n in B.operad.collection.spaces
    ]
    for n in arities:
        pool = sample(n) if sample else product(A.space.symbols, repeat=n)
        pool = list(pool)
        for p_sym in op.collection.symbols(n):
            for args in pool:
                row = _try_gamma(A, p_sym, args)
                if row is None:
                    continue
                lhs = {}
                for t, c in row.items():
                    for t2, c2 in G.apply_symbol(t).items():
                        lhs[t2] = lhs.get(t2, ZERO) + c * c2
                rhs = {}
                images = [list(G.apply_symbol(a).items()) for a in args]
                overflow = False
                for combo in product(*images):
                    val = ONE
                    exp = 0
                    below = op.deg(p_sym)
                    for (t, v), a in zip(combo, args):
                        entry_deg = B.space.deg(t) - A.space.deg(a)
                        exp += entry_deg * below
                        below += A.space.deg(a)
                        val *= v
                    brow = _try_gamma(B, p_sym, tuple(t for t, _ in combo))
                    if brow is None:
                        overflow = True
                        break
                    for t2, c2 in brow.items():
                        rhs[t2] = rhs.get(t2, ZERO) + val * c2 * ((-1) ** (exp % 2))
                if overflow:
                    continue
                keys = set(lhs) | set(rhs)
                for k in keys:
                    if lhs.get(k, ZERO) != rhs.get(k, ZERO):
                        bad.append((p_sym, args, k))
    ok = not bad
    if report:
        return ok, bad
    return ok


# decomposition identities -----------------------------------------------


def one_step_after_full(C, c_sym, n):
    """Left side of the decomposition identity: take the weight-n part,
    then one-step the cooperad factor.  Keys (left, i, right, carriers)."""
    out = {}
    for (b, ys), s1 in C.delta_n(n, c_sym).items():
        for s2, l, i, r in C.cooperad.decompose_symbol(b):
            exp = C.cooperad.deg(r) * sum(C.space.deg(y) for y in ys[: i - 1])
            key = (l, i, r, ys)
            out[key] = out.get(key, ZERO) + s1 * s2 * ((-1) ** (exp % 2))
    return {k: v for k, v in out.items() if v}


def full_after_inner(C, c_sym, n):
    """Right side: re-decompose one carrier of each smaller part, summed
    over the slot and the split n₁+n₂ = n+1.  Same normal form."""
    out = {}
    for n1 in range(1, n + 1):
        n2 = n + 1 - n1
        if n2 < 1 or n2 > C.cooperad.max_arity:
            continue
        for (l, zs), s1 in C.delta_n(n1, c_sym).items():
            for i in range(1, n1 + 1):
                for (r, us), s2 in C.delta_n(n2, zs[i - 1]).items():
                    ys = zs[: i - 1] + us + zs[i:]
                    key = (l, i, r, ys)
                    out[key] = out.get(key, ZERO) + s1 * s2
    return {k: v for k, v in out.items() if v}


def check_decomposition_identity(C, n):
    """The two expansions agree for every basis element."""
    bad = []
    for c_sym in C.space.symbols:
        lhs = one_step_after_full(C, c_sym, n)
        rhs = full_after_inner(C, c_sym, n)
        keys = set(lhs) | set(rhs)
        for k in keys:
            if lhs.get(k, ZERO) != rhs.get(k, ZERO):
                bad.append((c_sym, k, lhs.get(k, ZERO), rhs.get(k, ZERO)))
    return not bad, bad


def _apply_maps_interleaved(C, fs, l, i, r, ys):
    """Apply f₁…f_n to the carriers of a two-level term, each map picking
    up the degree of everything to its left in planar order."""
    results = []
    entries = [list(f.homogeneous_components().items()) for f in fs]
    for combo in product(*entries):
        total = 0
        for j, (fdeg, _comp) in enumerate(combo):
            left = C.cooperad.deg(l) + sum(C.space.deg(y) for y in ys[:j])
            if j + 1 >= i:
                left += C.cooperad.deg(r)
            total += fdeg * left
        rows = [
            list(comp.apply_symbol(y).items())
            for (_fdeg, comp), y in zip(combo, ys)
        ]
        for picked in product(*rows):
            coeff = (-1) ** (total % 2)
            for _t, v in picked:
                coeff *= v
            results.append((tuple(t for t, _ in picked), coeff))
    return results


def map_form_left(C, fs, c_sym, n):
    """Apply the maps to the left side of the decomposition identity."""
    out = {}
    for (l, i, r, ys), s in one_step_after_full(C, c_sym, n).items():
        for ws, v in _apply_maps_interleaved(C, fs, l, i, r, ys):
            key = (l, i, r, ws)
            out[key] = out.get(key, ZERO) + s * v
    return {k: v for k, v in out.items() if v}


def map_form_right(C, fs, c_sym, n):
    """Blockwise form: the middle block of maps rides inside the inner
    decomposition; the Koszul cost of the block is the sum of its entry
    degrees."""
    out = {}
    for n1 in range(1, n + 1):
        n2 = n + 1 - n1
        if n2 < 1 or n2 > C.cooperad.max_arity:
            continue
        for i in range(1, n1 + 1):
            before = fs[: i - 1]
            block = fs[i - 1 : i - 1 + n2]
            after = fs[i - 1 + n2 :]
            for (l, zs), s1 in C.delta_n(n1, c_sym).items():
                # expand the inner slot first
                for (r, us), s2 in C.delta_n(n2, zs[i - 1]).items():
                    inner_entries = [
                        list(f.homogeneous_components().items()) for f in block
                    ]
                    outer_entries = [
                        list(f.homogeneous_components().items())
                        for f in before + after
                    ]
                    for inner_combo in product(*inner_entries):
                        block_deg = sum(d for d, _ in inner_combo)
                        inner_exp = 0
                        left = C.cooperad.deg(r)
                        for (fdeg, _), u in zip(inner_combo, us):
                            inner_exp += fdeg * left
                            left += C.space.deg(u)
                        inner_rows = [
                            list(comp.apply_symbol(u).items())
                            for (_, comp), u in zip(inner_combo, us)
                        ]
                        for inner_picked in product(*inner_rows):
                            ival = s2 * ((-1) ** (inner_exp % 2))
                            for _, v in inner_picked:
                                ival *= v
                            inner_ws = tuple(t for t, _ in inner_picked)
                            for outer_combo in product(*outer_entries):
                                degs = [d for d, _ in outer_combo]
                                slot_degs = (
                                    degs[: i - 1] + [block_deg] + degs[i - 1 :]
                                )
                                outer_exp = 0
                                left2 = C.cooperad.deg(l)
                                for j, sd in enumerate(slot_degs):
                                    outer_exp += sd * left2
                                    left2 += C.space.deg(zs[j])
                                comps = [comp for _, comp in outer_combo]
                                rows = [
                                    list(
                                        comps[j].apply_symbol(
                                            (zs[: i - 1] + zs[i:])[j]
                                        ).items()
                                    )
                                    for j in range(len(comps))
                                ]
                                for picked in product(*rows):
                                    val = s1 * ival * ((-1) ** (outer_exp % 2))
                                    for _, v in picked:
                                        val *= v
                                    outer_ws = tuple(t for t, _ in picked)
                                    ws = (
                                        outer_ws[: i - 1]
                                        + inner_ws
                                        + outer_ws[i - 1 :]
                                    )
                                    key = (l, i, r, ws)
                                    out[key] = out.get(key, ZERO) + val
    return {k: v for k, v in out.items() if v}


def check_map_form_identity(C, fs, n):
    """Both map-decorated expansions agree for every basis element."""
    bad = []
    for c_sym in C.space.symbols:
        lhs = map_form_left(C, fs, c_sym, n)
        rhs = map_form_right(C, fs, c_sym, n)
        keys = set(lhs) | set(rhs)
        for k in keys:
            if lhs.get(k, ZERO) != rhs.get(k, ZERO):
                bad.append((c_sym, k, lhs.get(k, ZERO), rhs.get(k, ZERO)))
    return not bad, bad
