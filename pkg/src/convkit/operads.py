"""Non-symmetric operads and cooperads as exact structure constants.

An operad stores partial-composition tables (p, i, q) -> output
coefficients; a cooperad stores the one-step decomposition table
c -> (left, i, right) coefficients.  Identity/counit terms are implicit
everywhere: tables never mention the arity-1 identity symbol.  Cooperad
axioms are checked by transposing the tables and running the graded
operad axioms on the transpose.
"""

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
    hom_differential,
    rat,
    zero_map,
)

SUBSCRIPTS = "₀₁₂₃₄₅₆₇₈₉"


def subscript(n):
    return "".join(SUBSCRIPTS[int(ch)] for ch in str(n))


def mu(n):
    """Basis symbol of the one-dimensional associative operad arity."""
    return "μ" + subscript(n)


def mu_vee(n):
    """Basis symbol of the dual arity."""
    return mu(n) + "^∨"


IDENTITY = "id"


class NsCollection:
    """Arity-indexed graded spaces; arity 1 is spanned by the identity."""

    def __init__(self, name, spaces):
        # spaces: dict arity -> GradedSpace (arity 1 may be omitted)
        self.name = name
        self.spaces = dict(spaces)
        if 1 not in self.spaces:
            self.spaces[1] = graded_span("%s(1)" % name, (IDENTITY, 0))
        one = self.spaces[1]
        assert one.dim == 1 and one.symbols[0] == IDENTITY and one.deg(IDENTITY) == 0, (
            "arity 1 must be spanned by the identity symbol in degree 0"
        )
        self.max_arity = max(self.spaces)
        for n, sp in self.spaces.items():
            assert n >= 1, "arity 0 not allowed"
            sp.arity = n
        self._arity_of = {}
        for n, sp in self.spaces.items():
            for sym in sp.symbols:
                assert sym not in self._arity_of or n == 1, (
                    "symbol reused across arities",
                    sym,
                )
                self._arity_of[sym] = n

    def space(self, n):
        return self.spaces[n]

    def arity_of(self, sym):
        return self._arity_of[sym]

    def symbols(self, n):
        return self.spaces[n].symbols if n in self.spaces else []

    def deg(self, sym):
        return self.spaces[self._arity_of[sym]].deg(sym)


def _zero_differentials(collection):
    return {n: zero_map(sp, sp, degree=-1) for n, sp in collection.spaces.items()}


class Operad:
    """Reduced ns operad given by partial-composition structure constants."""

    def __init__(self, collection, comp, differentials=None, check=True):
        # comp: dict (p_sym, i, q_sym) -> {out_sym: coeff}; no identity rows
        self.collection = collection
        self.comp = {}
        for (p, i, q), row in comp.items():
            assert p != IDENTITY and q != IDENTITY, "unit rows are implicit"
            cleaned = {t: rat(c) for t, c in row.items() if rat(c)}
            if cleaned:
                self.comp[(p, i, q)] = cleaned
        self.differentials = differentials or _zero_differentials(collection)
        if check:
            check_operad_axioms(self)

    @property
    def name(self):
        return self.collection.name

    @property
    def max_arity(self):
        return self.collection.max_arity

    def space(self, n):
        return self.collection.space(n)

    def arity_of(self, sym):
        return self.collection.arity_of(sym)

    def deg(self, sym):
        return self.collection.deg(sym)

    def compose_symbols(self, p_sym, i, q_sym):
        """Structure constants of p ∘_i q as a sparse dict."""
        if q_sym == IDENTITY:
            return {p_sym: ONE}
        if p_sym == IDENTITY:
            assert i == 1, ("identity has one slot", i)
            return {q_sym: ONE}
        m = self.arity_of(p_sym)
        assert 1 <= i <= m, ("position out of range", p_sym, i)
        return dict(self.comp.get((p_sym, i, q_sym), {}))

    def partial_compose(self, p, i, q):
        """Bilinear ∘_i on Elements of the arity spaces."""
        m, n = p.space.arity, q.space.arity
        assert 1 <= i <= m, ("position out of range", i, m)
        out_space = self.space(m + n - 1)
        out = {}
        for ps, pc in p.coeffs.items():
            for qs, qc in q.coeffs.items():
                for t, c in self.compose_symbols(ps, i, qs).items():
                    out[t] = out.get(t, ZERO) + pc * qc * c
        return Element(out_space, out)

    def gamma_symbols(self, p_sym, q_syms):
        """Total composition p(q_1,…,q_k) by left-to-right insertion.

        Inserting left to right at positions 1, 1+n_1, 1+n_1+n_2, …
        consumes the arguments in tensor order, so no interchange signs
        appear beyond the structure constants themselves.
        """
        assert self.arity_of(p_sym) == len(q_syms), (p_sym, q_syms)
        state = {p_sym: ONE}
        pos = 1
        for q in q_syms:
            nxt = {}
            for s, c in state.items():
                for t, c2 in self.compose_symbols(s, pos, q).items():
                    nxt[t] = nxt.get(t, ZERO) + c * c2
            state = nxt
            pos += self.arity_of(q)
        return state

    def gamma(self, p, q_elems):
        """Multilinear total composition on Elements."""
        k = p.space.arity
        assert len(q_elems) == k, (k, len(q_elems))
        n = sum(q.space.arity for q in q_elems)
        out = {}
        for ps, pc in p.coeffs.items():
            for combo in product(*[list(q.coeffs.items()) for q in q_elems]):
                coeff = pc
                for _, c in combo:
                    coeff *= c
                for t, c2 in self.gamma_symbols(ps, tuple(s for s, _ in combo)).items():
                    out[t] = out.get(t, ZERO) + coeff * c2
        return Element(self.space(n), out)


def check_operad_axioms(op, max_arity=None):
    """Unit, sequential and parallel associativity, derivation; graded."""
    bound = max_arity or op.max_arity
    col = op.collection
    arities = [n for n in col.spaces if n <= bound]
    # unit laws are implicit by construction; check differential squares
    for n in arities:
        d = op.differentials[n]
        assert compose(d, d).is_zero(), ("operad differential d² ≠ 0", n)
    for a in arities:
        for b in arities:
            if a + b - 1 > bound:
                continue
            for c in arities:
                seq_ok = a + b + c - 2 <= bound
                for p in col.symbols(a):
                    for q in col.symbols(b):
                        for r in col.symbols(c):
                            if not seq_ok:
                                continue
                            _check_sequential(op, p, a, q, b, r, c)
                            _check_parallel(op, p, a, q, b, r, c)
    _check_derivation(op, bound)


def _sparse_eq(x, y):
    keys = set(x) | set(y)
    return all(x.get(k, ZERO) == y.get(k, ZERO) for k in keys)


def _compose_rows(op, row, i, q_sym):
    out = {}
    for s, c in row.items():
        for t, c2 in op.compose_symbols(s, i, q_sym).items():
            out[t] = out.get(t, ZERO) + c * c2
    return out


def _check_sequential(op, p, a, q, b, r, c):
    # (p ∘_i q) ∘_{i+j−1} r = p ∘_i (q ∘_j r)
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            lhs = _compose_rows(op, op.compose_symbols(p, i, q), i + j - 1, r)
            inner = op.compose_symbols(q, j, r)
            rhs = {}
            for s, cc in inner.items():
                for t, c2 in op.compose_symbols(p, i, s).items():
                    rhs[t] = rhs.get(t, ZERO) + cc * c2
            assert _sparse_eq(lhs, rhs), ("sequential axiom", p, i, q, j, r, lhs, rhs)


def _check_parallel(op, p, a, q, b, r, c):
    # i < j: (p ∘_i q) ∘_{j+b−1} r = (−1)^{|q||r|} (p ∘_j r) ∘_i q
    dq, dr = op.deg(q), op.deg(r)
    sign = (-1) ** ((dq * dr) % 2)
    for i in range(1, a + 1):
        for j in range(i + 1, a + 1):
            lhs = _compose_rows(op, op.compose_symbols(p, i, q), j + b - 1, r)
            rhs = _compose_rows(op, op.compose_symbols(p, j, r), i, q)
            rhs = {t: sign * v for t, v in rhs.items()}
            assert _sparse_eq(lhs, rhs), ("parallel axiom", p, i, q, j, r)


def _check_derivation(op, bound):
    # d(p ∘_i q) = d(p) ∘_i q + (−1)^{|p|} p ∘_i d(q), including zero products
    col = op.collection
    if all(d.is_zero() for d in op.differentials.values()):
        return
    arities = [n for n in col.spaces if n <= bound]
    for a in arities:
        for b in arities:
            n = a + b - 1
            if n > bound or n not in col.spaces:
                continue
            for p in col.symbols(a):
                for q in col.symbols(b):
                    for i in range(1, a + 1):
                        d_out = {}
                        for t, c in op.compose_symbols(p, i, q).items():
                            for t2, c2 in op.differentials[n].apply_symbol(t).items():
                                d_out[t2] = d_out.get(t2, ZERO) + c * c2
                        rhs = {}
                        for dp, c in op.differentials[a].apply_symbol(p).items():
                            for t, c2 in op.compose_symbols(dp, i, q).items():
                                rhs[t] = rhs.get(t, ZERO) + c * c2
                        sgn = (-1) ** (col.deg(p) % 2)
                        for dq, c in op.differentials[b].apply_symbol(q).items():
                            for t, c2 in op.compose_symbols(p, i, dq).items():
                                rhs[t] = rhs.get(t, ZERO) + sgn * c * c2
                        assert _sparse_eq(d_out, rhs), ("derivation axiom", p, i, q)


class Cooperad:
    """Reduced ns cooperad given by one-step decomposition constants."""

    def __init__(self, collection, delta1, differentials=None, check=True):
        # delta1: dict c_sym -> {(left_sym, i, right_sym): coeff}; counital
        # terms (identity on either side) are implicit, never stored.
        self.collection = collection
        self.delta1 = {}
        for c_sym, row in delta1.items():
            cleaned = {}
            for (l, i, r), coeff in row.items():
                assert l != IDENTITY and r != IDENTITY, "counit rows are implicit"
                coeff = rat(coeff)
                if coeff:
                    cleaned[(l, i, r)] = coeff
            if cleaned:
                self.delta1[c_sym] = cleaned
        self.differentials = differentials or _zero_differentials(collection)
        self._full_memo = {}
        if check:
            check_cooperad_axioms(self)

    @property
    def name(self):
        return self.collection.name

    @property
    def max_arity(self):
        return self.collection.max_arity

    def space(self, n):
        return self.collection.space(n)

    def arity_of(self, sym):
        return self.collection.arity_of(sym)

    def deg(self, sym):
        return self.collection.deg(sym)

    def decompose_symbol(self, c_sym):
        """All (coeff, left, i, right) of Δ_(1), counital terms included."""
        n = self.arity_of(c_sym)
        if n == 1:
            return [(ONE, IDENTITY, 1, c_sym)]
        out = [(coeff, l, i, r) for (l, i, r), coeff in self.delta1.get(c_sym, {}).items()]
        for i in range(1, n + 1):
            out.append((ONE, c_sym, i, IDENTITY))
        out.append((ONE, IDENTITY, 1, c_sym))
        return out

    def infinitesimal_decompose(self, c):
        """Δ_(1) on an Element, as a list of (coeff, left, i, right)."""
        terms = {}
        for sym, v in c.coeffs.items():
            for coeff, l, i, r in self.decompose_symbol(sym):
                key = (l, i, r)
                terms[key] = terms.get(key, ZERO) + v * coeff
        return [(c, l, i, r) for (l, i, r), c in terms.items() if c]

    def transpose_operad(self, check=False):
        """Plain transpose of Δ_(1); a graded operad iff the cooperad is valid."""
        comp = {}
        for c_sym, row in self.delta1.items():
            for (l, i, r), coeff in row.items():
                comp.setdefault((l, i, r), {})[c_sym] = coeff
        return Operad(self.collection, comp, self.differentials, check=check)

    def full_decompose(self, c_sym, k):
        """Weight-k component of the full decomposition, memoized.

        Returns a list of (coeff, outer_sym, inner_syms tuple); the
        coefficient of (c₀; c₁…c_k) is the coefficient of c in the
        transposed total composition γ(c₀; c₁…c_k).
        """
        key = (c_sym, k)
        if key in self._full_memo:
            return self._full_memo[key]
        if not hasattr(self, "_transpose"):
            self._transpose = self.transpose_operad(check=False)
        n = self.arity_of(c_sym)
        out = []
        if k == 1:
            out.append((ONE, IDENTITY, (c_sym,)))
        elif k <= n:
            for c0 in self.collection.symbols(k):
                for inner in _compositions(n, k, self.collection):
                    coeff = self._transpose.gamma_symbols(c0, inner).get(c_sym)
                    if coeff:
                        out.append((coeff, c0, inner))
        self._full_memo[key] = out
        return out


def _compositions(n, k, collection):
    """All k-tuples of symbols whose arities sum to n (identity allowed)."""
    tuples = [()]
    for j in range(k):
        nxt = []
        for tup in tuples:
            used = sum(collection.arity_of(s) for s in tup)
            remaining_slots = k - j - 1
            for m in sorted(collection.spaces):
                if used + m + remaining_slots <= n and (
                    remaining_slots > 0 or used + m == n
                ):
                    for sym in collection.symbols(m):
                        nxt.append(tup + (sym,))
        tuples = nxt
    return [t for t in tuples if sum(collection.arity_of(s) for s in t) == n]


def check_cooperad_axioms(coop, max_arity=None):
    """Counit laws are implicit; transpose must satisfy the operad axioms,
    and the differential must be a coderivation for Δ_(1)."""
    transpose = coop.transpose_operad(check=False)
    check_operad_axioms(transpose, max_arity=max_arity)
    _check_coderivation(coop, max_arity or coop.max_arity)


def _check_coderivation(coop, bound):
    # Δ_(1)(dc) = Σ (dc₁)⊗c₂ + (−1)^{|c₁|} c₁⊗(dc₂), matched per position
    col = coop.collection
    for n, sp in col.spaces.items():
        if n > bound:
            continue
        for c_sym in sp.symbols:
            lhs = {}
            for dc, v in coop.differentials[n].apply_symbol(c_sym).items():
                for coeff, l, i, r in coop.decompose_symbol(dc):
                    key = (l, i, r)
                    lhs[key] = lhs.get(key, ZERO) + v * coeff
            rhs = {}
            for coeff, l, i, r in coop.decompose_symbol(c_sym):
                a, b = col.arity_of(l), col.arity_of(r)
                for dl, v in coop.differentials[a].apply_symbol(l).items():
                    key = (dl, i, r)
                    rhs[key] = rhs.get(key, ZERO) + coeff * v
                sgn = (-1) ** (col.deg(l) % 2)
                for dr, v in coop.differentials[b].apply_symbol(r).items():
                    key = (l, i, dr)
                    rhs[key] = rhs.get(key, ZERO) + sgn * coeff * v
            assert _sparse_eq(lhs, rhs), ("coderivation axiom", c_sym)


# arity-wise maps and the convolution pre-Lie product -------------------


class ArityMap:
    """Arity-indexed family of linear maps 𝒞(n) → 𝒫(n)."""

    def __init__(self, source, target, maps=None, degree=None):
        self.source = source  # Cooperad
        self.target = target  # Operad
        self.maps = {}
        arities = sorted(set(source.collection.spaces) & set(target.collection.spaces))
        for n in arities:
            m = (maps or {}).get(n)
            if m is None:
                m = zero_map(source.space(n), target.space(n), degree=degree)
            self.maps[n] = m
        self.degree = degree

    def map(self, n):
        return self.maps[n]

    def __add__(self, other):
        deg = self.degree if self.degree == other.degree else None
        return ArityMap(
            self.source,
            self.target,
            {n: self.maps[n] + other.maps[n] for n in self.maps},
            degree=deg,
        )

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        return ArityMap(
            self.source,
            self.target,
            {n: rat(scalar) * m for n, m in self.maps.items()},
            degree=self.degree,
        )

    def is_zero(self):
        return all(m.is_zero() for m in self.maps.values())

    def hom_diff(self):
        """Arity-wise ∂ = d_𝒫 ∘ (−) − (−1)^{|·|} (−) ∘ d_𝒞."""
        return ArityMap(
            self.source,
            self.target,
            {
                n: hom_differential(
                    m, self.target.differentials[n], self.source.differentials[n]
                )
                for n, m in self.maps.items()
            },
        )


def convolution_star(alpha, beta):
    """(α⋆β)(c) = Σ ± α(c₁) ∘_i β(c₂) over Δ_(1)(c), Koszul signs entry-wise."""
    assert alpha.source is beta.source and alpha.target is beta.target
    coop, op = alpha.source, alpha.target
    maps = {}
    for n in alpha.maps:
        entries = {}
        src_sp, tgt_sp = coop.space(n), op.space(n)
        for c_sym in src_sp.symbols:
            for coeff, l, i, r in coop.decompose_symbol(c_sym):
                la, ra = coop.arity_of(l), coop.arity_of(r)
                if la not in alpha.maps or ra not in beta.maps:
                    continue
                a_row = alpha.maps[la].apply_symbol(l)
                if not a_row:
                    continue
                b_map = beta.maps[ra]
                for (bt, bs), bc in b_map.entries.items():
                    if bs != r:
                        continue
                    entry_deg = b_map.target.deg(bt) - b_map.source.deg(bs)
                    sign = (-1) ** ((entry_deg * coop.deg(l)) % 2)
                    for at, ac in a_row.items():
                        for t, c2 in op.compose_symbols(at, i, bt).items():
                            key = (t, c_sym)
                            entries[key] = entries.get(key, ZERO) + (
                                coeff * sign * ac * bc * c2
                            )
        maps[n] = LinMap(src_sp, tgt_sp, entries, degree=None, check=False)
    deg = None
    if alpha.degree is not None and beta.degree is not None:
        deg = alpha.degree + beta.degree
    out = ArityMap(alpha.source, alpha.target, maps, degree=deg)
    return out


def is_twisting_morphism(alpha, report=False):
    """∂(α) + α⋆α = 0 arity-wise, with α of degree −1 everywhere."""
    problems = []
    for n, m in sorted(alpha.maps.items()):
        for key in m.entries:
            if m.entry_degree(key) != -1:
                problems.append((n, "entry %s is not of degree −1" % (key,)))
    if not problems:
        residual = alpha.hom_diff() + convolution_star(alpha, alpha)
        for n, m in sorted(residual.maps.items()):
            if not m.is_zero():
                problems.append((n, "residual %r" % (sorted(m.entries.items()),)))
                break
    ok = not problems
    if report:
        return ok, problems
    return ok


class TwistingMorphism(ArityMap):
    """A degree −1 arity-wise map with verified Maurer–Cartan condition."""

    def __init__(self, source, target, maps=None, koszul=False, check=True):
        super().__init__(source, target, maps, degree=-1)
        self.koszul = koszul
        if check:
            ok, problems = is_twisting_morphism(self, report=True)
            assert ok, ("not a twisting morphism", problems)


# built-ins -------------------------------------------------------------


def as_operad(max_arity=4):
    """One operation per arity, degree 0, all compositions coefficient 1."""
    spaces = {
        n: graded_span("As(%d)" % n, (mu(n), 0)) for n in range(2, max_arity + 1)
    }
    col = NsCollection("As", spaces)
    comp = {}
    for a in range(2, max_arity + 1):
        for b in range(2, max_arity + 1):
            if a + b - 1 > max_arity:
                continue
            for i in range(1, a + 1):
                comp[(mu(a), i, mu(b))] = {mu(a + b - 1): 1}
    return Operad(col, comp)


def as_cooperad(max_arity=4):
    """Dual collection with |μ_n^∨| = n−1 and the signed transpose of the
    associative composition tables: the (n₁, i, n₂) block carries
    (−1)^{(n₂−1)(i−1)}, the unique global choice (up to equivalence)
    making κ a twisting morphism."""
    spaces = {
        n: graded_span("As^∨(%d)" % n, (mu_vee(n), n - 1))
        for n in range(2, max_arity + 1)
    }
    col = NsCollection("As^∨", spaces)
    delta1 = {}
    for n in range(2, max_arity + 1):
        row = {}
        for n1 in range(2, n):
            n2 = n + 1 - n1
            if n2 < 2:
                continue
            for i in range(1, n1 + 1):
                row[(mu_vee(n1), i, mu_vee(n2))] = (-1) ** (((n2 - 1) * (i - 1)) % 2)
        if row:
            delta1[mu_vee(n)] = row
    return Cooperad(col, delta1)


def kappa(source, target):
    """The classical twisting morphism As^∨ → As: μ₂^∨ ↦ μ₂, zero elsewhere."""
    maps = {}
    if 2 in source.collection.spaces and 2 in target.collection.spaces:
        maps[2] = LinMap(
            source.space(2), target.space(2), {(mu(2), mu_vee(2)): 1}, degree=-1
        )
    return TwistingMorphism(source, target, maps, koszul=True)


def zero_twisting(source, target):
    """The zero twisting morphism (not Koszul)."""
    return TwistingMorphism(source, target, {}, koszul=False)
