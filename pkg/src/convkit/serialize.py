"""Workspace files: a named registry of the engine's objects in JSON.

Top-level sections are `spaces`, `operads`, `cooperads`, `twisting`,
`algebras`, `coalgebras`, `maps`.  Scalars are strings "p/q"; structure
constants are arrays of [inputs…, [[output-symbol, coefficient], …]]
rows.  Loading canonicalizes the raw document (normalized scalars,
sorted rows), so dumping a loaded workspace and reparsing gives an
equal workspace; dumps are deterministic byte-for-byte.

Operads, cooperads and twisting morphisms may either name a compiled-in
construction ("As", "As^∨", "kappa", "zero") or spell out their
structure constants; algebras and coalgebras may give explicit tables
or a free/cofree recipe over a named generator space.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebras import Algebra, Coalgebra, cofree_coalgebra, free_algebra
from .linalg import GradedSpace, LinMap, make_differential, rat
from .operads import (
    Cooperad,
    NsCollection,
    Operad,
    TwistingMorphism,
    as_cooperad,
    as_operad,
    kappa,
    zero_twisting,
)


class WorkspaceError(ValueError):
    """Malformed or dangling workspace data, named."""


SECTIONS = (
    "spaces",
    "operads",
    "cooperads",
    "twisting",
    "algebras",
    "coalgebras",
    "maps",
)


@dataclass
class MapEntry:
    """A linear map between named carriers; `hom` optionally names the
    twisting morphism making it a Maurer–Cartan candidate entry map from
    the named coalgebra to the named algebra."""

    linmap: LinMap
    source: str
    target: str
    hom: str = None


@dataclass
class Workspace:
    """Loaded registry.  Equality compares the canonical raw document,
    so two workspaces are equal iff they serialize identically."""

    raw: dict
    spaces: dict = field(default_factory=dict)
    operads: dict = field(default_factory=dict)
    cooperads: dict = field(default_factory=dict)
    twisting: dict = field(default_factory=dict)
    algebras: dict = field(default_factory=dict)
    coalgebras: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)

    def __eq__(self, other):
        return isinstance(other, Workspace) and self.raw == other.raw

    def sole(self, section):
        """The single entry of a section, for commands run without an
        explicit object name."""
        table = getattr(self, section)
        if len(table) != 1:
            raise WorkspaceError(
                "need exactly one entry in %r, found %d" % (section, len(table))
            )
        return next(iter(table.items()))


# scalar / row helpers -------------------------------------------------------


def _scal(x):
    try:
        return rat(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise WorkspaceError("bad scalar %r" % (x,))


def _fmt(c):
    return str(Fraction(c))


def _row_out(row):
    return sorted([sym, _fmt(c)] for sym, c in row.items())


def _row_in(rows):
    return {sym: _scal(c) for sym, c in rows}


def _entries_out(linmap):
    return sorted([t, s, _fmt(c)] for (t, s), c in linmap.entries.items() if c)


def _entries_in(rows, kind, name):
    out = {}
    for item in rows:
        if len(item) != 3:
            raise WorkspaceError("%s %r: bad entry row %r" % (kind, name, item))
        t, s, c = item
        out[(t, s)] = out.get((t, s), 0) + _scal(c)
    return out


def _space_out(sp):
    return [[sym, sp.deg(sym)] for sym in sp.symbols]


def _space_in(name, rows):
    try:
        return GradedSpace(name, [(s, d) for s, d in rows])
    except (TypeError, ValueError, AssertionError) as e:
        raise WorkspaceError("space %r: %s" % (name, e))


# section loaders -------------------------------------------------------------


def _need(table, name, kind):
    if name not in table:
        raise WorkspaceError("%s %r is not defined" % (kind, name))
    return table[name]


def _load_operad(name, doc):
    if "builtin" in doc:
        if doc["builtin"] != "As":
            raise WorkspaceError("operad %r: unknown builtin %r" % (name, doc["builtin"]))
        return as_operad(int(doc.get("max_arity", 4)))
    arities = {
        int(n): _space_in("%s(%s)" % (name, n), rows)
        for n, rows in doc["arities"].items()
    }
    comp = {}
    for p, i, q, row in doc.get("compose", []):
        comp[(p, int(i), q)] = _row_in(row)
    return Operad(NsCollection(name, arities), comp)


def _dump_operad(op):
    if op.collection.name == "As":
        return {"builtin": "As", "max_arity": op.max_arity}
    doc = {
        "arities": {
            str(n): _space_out(sp)
            for n, sp in sorted(op.collection.spaces.items())
            if n != 1
        },
        "compose": sorted(
            [p, i, q, _row_out(row)] for (p, i, q), row in op.comp.items()
        ),
    }
    return doc


def _load_cooperad(name, doc):
    if "builtin" in doc:
        if doc["builtin"] != "As^∨":
            raise WorkspaceError(
                "cooperad %r: unknown builtin %r" % (name, doc["builtin"])
            )
        return as_cooperad(int(doc.get("max_arity", 4)))
    arities = {
        int(n): _space_in("%s(%s)" % (name, n), rows)
        for n, rows in doc["arities"].items()
    }
    delta1 = {}
    for c, l, i, r, coeff in doc.get("decompose", []):
        delta1.setdefault(c, {})[(l, int(i), r)] = _scal(coeff)
    return Cooperad(NsCollection(name, arities), delta1)


def _dump_cooperad(coop):
    if coop.collection.name == "As^∨":
        return {"builtin": "As^∨", "max_arity": coop.max_arity}
    rows = []
    for c, row in coop.delta1.items():
        for (l, i, r), coeff in row.items():
            rows.append([c, l, i, r, _fmt(coeff)])
    return {
        "arities": {
            str(n): _space_out(sp)
            for n, sp in sorted(coop.collection.spaces.items())
            if n != 1
        },
        "decompose": sorted(rows),
    }


def _load_twisting(name, doc, cooperads, operads):
    coop = _need(cooperads, doc["cooperad"], "cooperad")
    op = _need(operads, doc["operad"], "operad")
    if "builtin" in doc:
        if doc["builtin"] == "kappa":
            return kappa(coop, op)
        if doc["builtin"] == "zero":
            return zero_twisting(coop, op)
        raise WorkspaceError(
            "twisting %r: unknown builtin %r" % (name, doc["builtin"])
        )
    by_arity = {}
    for c, p, coeff in doc.get("entries", []):
        n = coop.arity_of(c)
        by_arity.setdefault(n, {})[(p, c)] = _scal(coeff)
    maps = {
        n: LinMap(coop.space(n), op.space(n), entries, degree=-1)
        for n, entries in by_arity.items()
    }
    return TwistingMorphism(coop, op, maps, koszul=bool(doc.get("koszul", False)))


def _dump_twisting(name, alpha, raw_doc):
    # builtins round-trip by their recipe; custom ones by their entries
    doc = {"cooperad": raw_doc["cooperad"], "operad": raw_doc["operad"]}
    if "builtin" in raw_doc:
        doc["builtin"] = raw_doc["builtin"]
        return doc
    rows = []
    for n, m in alpha.maps.items():
        for (p, c), coeff in m.entries.items():
            rows.append([c, p, _fmt(coeff)])
    doc["entries"] = sorted(rows)
    doc["koszul"] = bool(alpha.koszul)
    return doc


def _load_algebra(name, doc, operads, spaces):
    op = _need(operads, doc["operad"], "operad")
    if "free" in doc:
        recipe = doc["free"]
        gens = _need(spaces, recipe["generators"], "space")
        d = None
        if recipe.get("differential"):
            d = make_differential(
                gens, _entries_in(recipe["differential"], "algebra", name)
            )
        return free_algebra(op, gens, int(recipe["W"]), gen_differential=d)
    sp = _need(spaces, doc["space"], "space")
    action = {}
    for p, args, row in doc.get("action", []):
        action[(p, tuple(args))] = _row_in(row)
    d = None
    if doc.get("differential"):
        d = make_differential(sp, _entries_in(doc["differential"], "algebra", name))
    return Algebra(op, sp, action, differential=d)


def _load_coalgebra(name, doc, cooperads, spaces):
    coop = _need(cooperads, doc["cooperad"], "cooperad")
    if "cofree" in doc:
        recipe = doc["cofree"]
        cogens = _need(spaces, recipe["cogenerators"], "space")
        d = None
        if recipe.get("differential"):
            d = make_differential(
                cogens, _entries_in(recipe["differential"], "coalgebra", name)
            )
        return cofree_coalgebra(coop, cogens, int(recipe["W"]), cogen_differential=d)
    sp = _need(spaces, doc["space"], "space")
    delta = {}
    for c, b, children, coeff in doc.get("decompose", []):
        delta.setdefault(c, {})[(b, tuple(children))] = _scal(coeff)
    d = None
    if doc.get("differential"):
        d = make_differential(sp, _entries_in(doc["differential"], "coalgebra", name))
    return Coalgebra(coop, sp, delta, differential=d)


def _carrier_space(ws, name, kind, section_name):
    if name in ws.spaces:
        return ws.spaces[name]
    if section_name == "source" and name in ws.coalgebras:
        return ws.coalgebras[name].space
    if section_name == "target" and name in ws.algebras:
        return ws.algebras[name].space
    raise WorkspaceError("map %r: %s %r is not defined" % (kind, section_name, name))


def _load_map(ws, name, doc):
    src = _carrier_space(ws, doc["source"], name, "source")
    tgt = _carrier_space(ws, doc["target"], name, "target")
    degree = doc.get("degree")
    try:
        lm = LinMap(
            src,
            tgt,
            _entries_in(doc.get("entries", []), "map", name),
            degree=degree if degree is None else int(degree),
        )
    except AssertionError as e:
        raise WorkspaceError("map %r: %s" % (name, e))
    hom = doc.get("hom")
    if hom is not None:
        if doc["source"] not in ws.coalgebras:
            raise WorkspaceError("map %r: hom source must be a coalgebra" % name)
        if doc["target"] not in ws.algebras:
            raise WorkspaceError("map %r: hom target must be an algebra" % name)
        _need(ws.twisting, hom, "twisting")
    return MapEntry(lm, doc["source"], doc["target"], hom)


# canonicalization ------------------------------------------------------------


def _canonical(ws, raw):
    doc = {}
    doc["spaces"] = {name: _space_out(sp) for name, sp in ws.spaces.items()}
    doc["operads"] = {name: _dump_operad(op) for name, op in ws.operads.items()}
    doc["cooperads"] = {name: _dump_cooperad(c) for name, c in ws.cooperads.items()}
    doc["twisting"] = {
        name: _dump_twisting(name, alpha, raw["twisting"][name])
        for name, alpha in ws.twisting.items()
    }
    doc["algebras"] = {}
    for name, A in ws.algebras.items():
        src = dict(raw["algebras"][name])
        if "free" in src:
            recipe = {"generators": src["free"]["generators"], "W": int(src["free"]["W"])}
            if src["free"].get("differential"):
                recipe["differential"] = sorted(
                    [t, s, _fmt(_scal(c))] for t, s, c in src["free"]["differential"]
                )
            doc["algebras"][name] = {"operad": src["operad"], "free": recipe}
        else:
            out = {
                "operad": src["operad"],
                "space": src["space"],
                "action": sorted(
                    [p, list(args), _row_out(row)]
                    for (p, args), row in A.action.items()
                ),
            }
            if not A.differential.is_zero():
                out["differential"] = _entries_out(A.differential)
            doc["algebras"][name] = out
    doc["coalgebras"] = {}
    for name, C in ws.coalgebras.items():
        src = dict(raw["coalgebras"][name])
        if "cofree" in src:
            recipe = {
                "cogenerators": src["cofree"]["cogenerators"],
                "W": int(src["cofree"]["W"]),
            }
            if src["cofree"].get("differential"):
                recipe["differential"] = sorted(
                    [t, s, _fmt(_scal(c))] for t, s, c in src["cofree"]["differential"]
                )
            doc["coalgebras"][name] = {"cooperad": src["cooperad"], "cofree": recipe}
        else:
            out = {
                "cooperad": src["cooperad"],
                "space": src["space"],
                "decompose": sorted(
                    [c, b, list(children), _fmt(coeff)]
                    for c, row in C.delta.items()
                    for (b, children), coeff in row.items()
                ),
            }
            if not C.differential.is_zero():
                out["differential"] = _entries_out(C.differential)
            doc["coalgebras"][name] = out
    doc["maps"] = {}
    for name, entry in ws.maps.items():
        out = {
            "source": entry.source,
            "target": entry.target,
            "entries": _entries_out(entry.linmap),
        }
        if entry.linmap.degree is not None:
            out["degree"] = entry.linmap.degree
        if entry.hom is not None:
            out["hom"] = entry.hom
        doc["maps"][name] = out
    return doc


# public API -------------------------------------------------------------------


def loads(text):
    """Parse a workspace document; parse errors carry line/column."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise WorkspaceError(
            "parse error at line %d column %d: %s" % (e.lineno, e.colno, e.msg)
        )
    if not isinstance(raw, dict):
        raise WorkspaceError("top level must be an object")
    unknown = set(raw) - set(SECTIONS)
    if unknown:
        raise WorkspaceError("unknown sections: %s" % ", ".join(sorted(unknown)))
    for section in SECTIONS:
        raw.setdefault(section, {})
    ws = Workspace(raw={})
    try:
        for name, rows in raw["spaces"].items():
            ws.spaces[name] = _space_in(name, rows)
        for name, doc in raw["operads"].items():
            ws.operads[name] = _load_operad(name, doc)
        for name, doc in raw["cooperads"].items():
            ws.cooperads[name] = _load_cooperad(name, doc)
        for name, doc in raw["twisting"].items():
            ws.twisting[name] = _load_twisting(name, doc, ws.cooperads, ws.operads)
        for name, doc in raw["algebras"].items():
            ws.algebras[name] = _load_algebra(name, doc, ws.operads, ws.spaces)
        for name, doc in raw["coalgebras"].items():
            ws.coalgebras[name] = _load_coalgebra(name, doc, ws.cooperads, ws.spaces)
        for name, doc in raw["maps"].items():
            ws.maps[name] = _load_map(ws, name, doc)
    except WorkspaceError:
        raise
    except (KeyError, TypeError, ValueError, AssertionError) as e:
        raise WorkspaceError("malformed workspace data: %r" % (e,))
    ws.raw = _canonical(ws, raw)
    return ws


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(ws):
    """Canonical text form; deterministic byte-for-byte."""
    return json.dumps(ws.raw, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def dump(ws, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(ws))
