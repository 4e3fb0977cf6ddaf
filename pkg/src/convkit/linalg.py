"""Exact graded linear algebra over the rationals, with Koszul signs.

Basis symbols are plain strings; tensor-product spaces get canonical
symbols joined with "⊗" (compound factor names are parenthesized so the
factorization stays unambiguous).  All coefficients are `Fraction`s.
Degrees are homological (lower); a map of degree d sends degree-k
symbols to degree-(k+d) symbols.
"""

from fractions import Fraction
from itertools import product, permutations


def rat(x):
    """Coerce an int / string / Fraction to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError("not an exact scalar: %r" % (x,))


ZERO = Fraction(0)
ONE = Fraction(1)


# symbols -------------------------------------------------------------


def wrap_symbol(sym):
    """Parenthesize a compound symbol so it can sit inside a product."""
    return "(%s)" % sym if "⊗" in sym else sym


def tensor_symbol(parts):
    """Canonical name of a product basis symbol: a⊗b⊗(c⊗d)."""
    return "⊗".join(wrap_symbol(p) for p in parts)


class GradedSpace:
    """A finite list of basis symbols, each with an integer degree."""

    def __init__(self, name, degrees):
        # degrees: dict symbol -> degree, or iterable of (symbol, degree)
        if not isinstance(degrees, dict):
            degrees = dict(degrees)
        for sym, d in degrees.items():
            assert isinstance(sym, str) and isinstance(d, int), (sym, d)
        self.name = name
        self.degrees = dict(degrees)
        self.symbols = list(degrees)
        assert len(set(self.symbols)) == len(self.symbols), "duplicate basis symbols"
        self.factors = None  # set by tensor_space
        self.factorization = None  # symbol -> tuple of factor symbols

    def deg(self, sym):
        return self.degrees[sym]

    @property
    def dim(self):
        return len(self.symbols)

    def __contains__(self, sym):
        return sym in self.degrees

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.degrees == other.degrees

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "GradedSpace(%s, dim=%d)" % (self.name, self.dim)

    def zero(self):
        return Element(self, {})

    def basis(self, sym):
        assert sym in self.degrees, (sym, self.name)
        return Element(self, {sym: ONE})

    def element(self, coeffs):
        return Element(self, {s: rat(c) for s, c in coeffs.items()})


def graded_span(name, *symdegs):
    """Convenience: graded_span("A", ("w", 0), ...)"""
    return GradedSpace(name, symdegs)


def tensor_space(*spaces, name=None):
    """Product space with canonical symbols; remembers the factorization."""
    assert spaces, "empty tensor product"
    degrees = {}
    factorization = {}
    for combo in product(*[sp.symbols for sp in spaces]):
        sym = tensor_symbol(combo)
        assert sym not in degrees, ("product symbol collision", sym)
        degrees[sym] = sum(sp.deg(s) for sp, s in zip(spaces, combo))
        factorization[sym] = combo
    out = GradedSpace(name or "⊗".join(sp.name for sp in spaces), degrees)
    out.factors = list(spaces)
    out.factorization = factorization
    return out


# elements ------------------------------------------------------------


class Element:
    """Sparse rational vector in a GradedSpace (zero coefficients pruned)."""

    def __init__(self, space, coeffs):
        self.space = space
        self.coeffs = {}
        for sym, c in coeffs.items():
            c = rat(c)
            if c:
                assert sym in space.degrees, (sym, space.name)
                self.coeffs[sym] = c

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        """Common degree of the support, or None if mixed/zero."""
        degs = {self.space.deg(s) for s in self.coeffs}
        return degs.pop() if len(degs) == 1 else None

    def __add__(self, other):
        assert isinstance(other, Element) and other.space == self.space
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, ZERO) + c
        return Element(self.space, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, scalar):
        c = rat(scalar)
        return Element(self.space, {s: c * v for s, v in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.space == other.space
            and self.coeffs == other.coeffs
        )

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "Element(%s)" % format_coeffs(self.coeffs)


def format_coeffs(coeffs):
    """Human form of a sparse coefficient dict: w − 1/2·v."""
    if not coeffs:
        return "0"
    bits = []
    for sym in sorted(coeffs):
        c = coeffs[sym]
        sgn = "−" if c < 0 else "+"
        mag = abs(c)
        body = sym if mag == 1 else "%s·%s" % (mag, sym)
        bits.append((sgn, body))
    first_sgn, first_body = bits[0]
    out = ("−" if first_sgn == "−" else "") + first_body
    for sgn, body in bits[1:]:
        out += " %s %s" % (sgn, body)
    return out


# linear maps ----------------------------------------------------------


class LinMap:
    """Sparse linear map; entries keyed (target symbol, source symbol).

    `degree` is the declared homogeneous degree, or None for maps with
    mixed-degree entries (these are legal; sign-sensitive operations
    work entry-wise, which agrees with splitting into homogeneous
    components).
    """

    def __init__(self, source, target, entries, degree=None, check=True):
        self.source = source
        self.target = target
        self.entries = {}
        for (t, s), c in entries.items():
            c = rat(c)
            if c:
                self.entries[(t, s)] = c
        self.degree = degree
        if check:
            for (t, s) in self.entries:
                assert s in source.degrees, (s, source.name)
                assert t in target.degrees, (t, target.name)
                if degree is not None:
                    got = target.deg(t) - source.deg(s)
                    assert got == degree, ("entry degree mismatch", t, s, got, degree)

    def entry_degree(self, key):
        t, s = key
        return self.target.deg(t) - self.source.deg(s)

    def is_zero(self):
        return not self.entries

    def is_homogeneous(self):
        return self.degree is not None

    def homogeneous_components(self):
        """dict degree -> LinMap with that degree's entries."""
        comps = {}
        for key, c in self.entries.items():
            comps.setdefault(self.entry_degree(key), {})[key] = c
        return {
            d: LinMap(self.source, self.target, ent, degree=d, check=False)
            for d, ent in comps.items()
        }

    def __call__(self, elem):
        assert isinstance(elem, Element) and elem.space == self.source, (
            elem,
            self.source.name,
        )
        out = {}
        for (t, s), c in self.entries.items():
            v = elem.coeffs.get(s)
            if v:
                out[t] = out.get(t, ZERO) + c * v
        return Element(self.target, out)

    def apply_symbol(self, sym):
        """Image of a basis symbol, as a sparse dict."""
        out = {}
        for (t, s), c in self.entries.items():
            if s == sym:
                out[t] = out.get(t, ZERO) + c
        return out

    def __add__(self, other):
        assert other.source == self.source and other.target == self.target
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out.get(k, ZERO) + c
        deg = self.degree if self.degree == other.degree else None
        return LinMap(self.source, self.target, out, degree=deg, check=False)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, scalar):
        c = rat(scalar)
        return LinMap(
            self.source,
            self.target,
            {k: c * v for k, v in self.entries.items()},
            degree=self.degree,
            check=False,
        )

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, LinMap)
            and self.source == other.source
            and self.target == other.target
            and self.entries == other.entries
        )

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "LinMap(%s→%s, %d entries, deg=%s)" % (
            self.source.name,
            self.target.name,
            len(self.entries),
            self.degree,
        )


def zero_map(source, target, degree=None):
    return LinMap(source, target, {}, degree=degree, check=False)


def identity_map(space):
    return LinMap(
        space, space, {(s, s): ONE for s in space.symbols}, degree=0, check=False
    )


def compose(g, f):
    """g after f, exact sparse product."""
    assert f.target == g.source, ("shape mismatch", f.target.name, g.source.name)
    by_src = {}
    for (t, s), c in f.entries.items():
        by_src.setdefault(s, []).append((t, c))
    out = {}
    g_by_src = {}
    for (t, s), c in g.entries.items():
        g_by_src.setdefault(s, []).append((t, c))
    for s, terms in by_src.items():
        for mid, c1 in terms:
            for t, c2 in g_by_src.get(mid, ()):  # noqa: B905
                key = (t, s)
                out[key] = out.get(key, ZERO) + c2 * c1
    deg = None
    if g.degree is not None and f.degree is not None:
        deg = g.degree + f.degree
    return LinMap(f.source, g.target, out, degree=deg, check=False)


def make_differential(space, entries):
    """Validated degree −1 square-zero map space → space."""
    d = LinMap(space, space, entries, degree=-1)
    dd = compose(d, d)
    assert dd.is_zero(), ("differential does not square to zero", dd.entries)
    return d


def hom_differential(f, d_target, d_source):
    """∂(f) = d_target∘f − (−1)^{|f|} f∘d_source, component-wise in |f|."""
    out = compose(d_target, f)
    for deg, comp in f.homogeneous_components().items():
        out = out + (-((-1) ** (deg % 2))) * compose(comp, d_source)
    if f.degree is not None:
        out.degree = f.degree - 1
    return out


def is_chain_map(f, d_target, d_source):
    return hom_differential(f, d_target, d_source).is_zero()


# tensor calculus ------------------------------------------------------


def tensor_map(maps, source=None, target=None):
    """Tensor product of maps with the Koszul sign rule.

    The sign on an entry combination is (−1)^{Σ_j d_j·(|s_1|+…+|s_{j−1}|)}
    where d_j is the j-th map's entry degree and |s_k| the degree of the
    k-th source symbol it eats.  Optional `source`/`target` spaces (with
    matching canonical symbols) let the result live on shared spaces.
    """
    assert maps, "empty tensor product of maps"
    src = source or tensor_space(*[m.source for m in maps])
    tgt = target or tensor_space(*[m.target for m in maps])
    entries = {}
    items = [list(m.entries.items()) for m in maps]
    for combo in product(*items):
        coeff = ONE
        exp = 0
        below = 0  # total source degree to the left
        for m, ((t, s), c) in zip(maps, combo):
            coeff *= c
            exp += (m.target.deg(t) - m.source.deg(s)) * below
            below += m.source.deg(s)
        key = (
            tensor_symbol([t for ((t, _), _) in combo]),
            tensor_symbol([s for ((_, s), _) in combo]),
        )
        assert key[0] in tgt.degrees and key[1] in src.degrees, key
        val = coeff * ((-1) ** (exp % 2))
        entries[key] = entries.get(key, ZERO) + val
    deg = None
    if all(m.degree is not None for m in maps):
        deg = sum(m.degree for m in maps)
    return LinMap(src, tgt, entries, degree=deg, check=False)


def koszul_permutation_sign(degrees, perm):
    """Sign of permuting graded slots: output k takes input perm[k]."""
    exp = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                exp += degrees[perm[a]] * degrees[perm[b]]
    return Fraction((-1) ** (exp % 2))


def koszul_symmetrize(degrees):
    """All (sign, perm) pairs, perm as tuples of input indices."""
    n = len(degrees)
    return [
        (koszul_permutation_sign(degrees, p), p) for p in permutations(range(n))
    ]


def koszul_symmetrize_maps(maps):
    """All Koszul-signed reorderings of a tuple of homogeneous maps."""
    degs = []
    for m in maps:
        assert m.degree is not None, "symmetrizing a non-homogeneous map"
        degs.append(m.degree)
    out = []
    for sign, perm in koszul_symmetrize(degs):
        out.append((sign, tuple(maps[i] for i in perm)))
    return out
