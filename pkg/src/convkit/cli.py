"""Command line driver: scenario batteries and workspace-file checks.

Every command prints one line per check and exits 0 only if all pass;
the first failing check is named on the last line.  `--json` appends a
machine-readable report after the text.  Commands that sample random
instances seed their generator from the CONVKIT_SEED environment
variable (default 0), so output is deterministic for a fixed seed.
"""

import json
import os
import random
import sys
from fractions import Fraction
from itertools import product

import click

from . import scenarios
from .algebras import (
    TruncationOverflow,
    bar,
    check_algebra_axioms,
    check_coalgebra_axioms,
    check_decomposition_identity,
    check_map_form_identity,
    cobar,
    cofree_coalgebra,
    is_algebra_morphism,
    is_coalgebra_morphism,
)
from .brackets import (
    check_generalized_jacobi,
    eval_bracket,
    mc_residual,
)
from .convolution import (
    alg_morphism_to_mc,
    build_convolution,
    check_strictness,
    coalg_morphism_to_mc,
    compose_action,
    deformation_family,
    equalizer_check,
    hom_l,
    hom_r,
    mc_to_alg_morphism,
    mc_to_coalg_morphism,
)
from .linalg import LinMap, graded_span
from .operads import IDENTITY, as_cooperad, check_cooperad_axioms, check_operad_axioms
from .scenarios import atom, word
from .serialize import WorkspaceError, dumps, load, loads


def _seed():
    return int(os.environ.get("CONVKIT_SEED", "0"))


def _fmt_elem(coeffs):
    if not coeffs:
        return "0"
    return " + ".join(
        "%s·%s" % (c, s) if c != 1 else s for s, c in sorted(coeffs.items())
    )


class Battery:
    """Ordered pass/fail ledger shared by all commands."""

    def __init__(self):
        self.checks = []

    def add(self, name, ok, detail=""):
        self.checks.append({"name": name, "ok": bool(ok), "detail": str(detail)})
        return bool(ok)

    def run(self, name, fn):
        """Record an assertion-style checker: passing is silent, a raised
        AssertionError fails the check with its payload."""
        try:
            fn()
        except AssertionError as e:
            return self.add(name, False, repr(e.args))
        return self.add(name, True)

    @property
    def ok(self):
        return all(c["ok"] for c in self.checks)


def _finish(battery, as_json, extra=None):
    for c in battery.checks:
        line = "%s  %s" % ("pass" if c["ok"] else "FAIL", c["name"])
        if c["detail"]:
            line += " — " + c["detail"]
        click.echo(line)
    bad = next((c for c in battery.checks if not c["ok"]), None)
    if bad is None:
        click.echo("all %d checks passed" % len(battery.checks))
    else:
        click.echo("first failure: %s" % bad["name"])
    if as_json:
        report = {"ok": battery.ok, "checks": battery.checks}
        if extra:
            report.update(extra)
        click.echo(json.dumps(report, sort_keys=True, ensure_ascii=False))
    sys.exit(0 if battery.ok else 1)


def _resolve(target):
    """A target is either a compiled-in scenario name or a workspace file."""
    if target.startswith("builtin:"):
        if target not in scenarios.BUILTIN:
            raise click.ClickException(
                "unknown builtin scenario %r (have: %s)"
                % (target, ", ".join(sorted(scenarios.BUILTIN)))
            )
        return "scenario", target, scenarios.BUILTIN[target]()
    try:
        return "workspace", target, load(target)
    except OSError as e:
        raise click.ClickException(str(e))
    except WorkspaceError as e:
        raise click.ClickException("%s: %s" % (target, e))


def _hom_entries(ws, name=None):
    """The Maurer–Cartan candidates of a workspace: hom-tagged maps with
    their convolution instances."""
    picked = []
    for map_name, entry in sorted(ws.maps.items()):
        if entry.hom is None:
            continue
        if name is not None and map_name != name:
            continue
        h = build_convolution(
            ws.twisting[entry.hom],
            ws.coalgebras[entry.source],
            ws.algebras[entry.target],
        )
        picked.append((map_name, entry, h))
    if name is not None and not picked:
        raise click.ClickException("map %r is not a hom-tagged entry" % name)
    return picked


def _difference_row(diff):
    if diff is None:
        return None
    return {
        "arity": diff["arity"],
        "inputs": list(diff["inputs"]),
        "lhs": {s: str(Fraction(c)) for s, c in diff["lhs"].items()},
        "rhs": {s: str(Fraction(c)) for s, c in diff["rhs"].items()},
    }


@click.group()
def main():
    """Exact convolution homotopy algebra workbench."""


# verify -----------------------------------------------------------------------


def _verify_scenario(b, name, cast, max_arity):
    if name == "builtin:appendixA":
        alpha = cast["alpha"]
        b.run("operad axioms", lambda: check_operad_axioms(alpha.target, max_arity=max_arity))
        b.run("cooperad axioms", lambda: check_cooperad_axioms(alpha.source, max_arity=max_arity))
        for corner, h in sorted(cast["corners"].items()):
            bound = min(max_arity, h.family.max_arity)
            rep = check_generalized_jacobi(h.family, up_to_arity=bound)
            b.add(
                "homotopy relations on corner %s (arity ≤ %d)" % (corner, bound),
                rep["ok"],
                "%d tuples" % rep["checked"],
            )
        b.add("postcomposition datum flat", not mc_residual(cast["h_psi"].family, cast["psi"]).coeffs)
        b.add("sample element flat", not mc_residual(cast["corners"]["CA"].family, cast["f"]).coeffs)
        T_lr = compose_action("lr", cast["corners"], cast["phi"], cast["psi"], cast["OmC"])
        T_rl = compose_action("rl", cast["corners"], cast["phi"], cast["psi"], cast["OmC"])
        fa = atom(word(IDENTITY, "y"), word(IDENTITY, "z"))
        lr = T_lr.component_symbols(3, (fa, fa, fa))
        rl = T_rl.component_symbols(3, (fa, fa, fa))
        b.add(
            "composition orders differ",
            lr == {} and rl == {atom("x", "w"): Fraction(1)},
            "ℓ∘r: %s, r∘ℓ: %s" % (_fmt_elem(lr), _fmt_elem(rl)),
        )
        F = mc_to_coalg_morphism(cast["corners"]["CA"], cast["f"], cast["barA"])
        back = coalg_morphism_to_mc(cast["corners"]["CA"], F)
        b.add("coinduction round-trip", back.element == cast["f"].element)
    elif name == "builtin:kappaEqualizer":
        alpha = cast["alpha"]
        b.run("operad axioms", lambda: check_operad_axioms(alpha.target, max_arity=max_arity))
        b.run("cooperad axioms", lambda: check_cooperad_axioms(alpha.source, max_arity=max_arity))
        for corner in ("CA", "CpA"):
            h = cast["corners"][corner]
            bound = min(max_arity, h.family.max_arity)
            rep = check_generalized_jacobi(h.family, up_to_arity=bound)
            b.add(
                "homotopy relations on corner %s (arity ≤ %d)" % (corner, bound),
                rep["ok"],
                "%d tuples" % rep["checked"],
            )
        b.add("postcomposition datum flat", not mc_residual(cast["h_psi"].family, cast["psi"]).coeffs)
        rep = equalizer_check(
            cast["corners"], cast["phi"], cast["psi"], cast["OmC"],
            resolution=cast["resolution"], eps=cast["eps"],
            res_corners=cast["res_corners"], rpsi=cast["rpsi"],
            up_to_arity=2, max_weight=3,
        )
        b.add("raw orders differ", rep["raw_equal"] is False)
        b.add("rectified orders agree", rep["rectified_equal"] is True)
    else:  # pragma: no cover - future scenarios
        raise click.ClickException("no verify battery for %r" % name)


def _verify_workspace(b, ws, max_arity, max_weight):
    for name, op in sorted(ws.operads.items()):
        bound = min(max_arity, op.max_arity)
        b.run("operad %r axioms (arity ≤ %d)" % (name, bound),
              lambda op=op, bound=bound: check_operad_axioms(op, max_arity=bound))
    for name, coop in sorted(ws.cooperads.items()):
        bound = min(max_arity, coop.max_arity)
        b.run("cooperad %r axioms (arity ≤ %d)" % (name, bound),
              lambda coop=coop, bound=bound: check_cooperad_axioms(coop, max_arity=bound))
    b.add("twisting morphisms satisfy their constraint",
          True, "%d validated at load" % len(ws.twisting))
    for name, A in sorted(ws.algebras.items()):
        b.run("algebra %r axioms" % name, lambda A=A: check_algebra_axioms(A))
    for name, C in sorted(ws.coalgebras.items()):
        b.run("coalgebra %r axioms" % name, lambda C=C: check_coalgebra_axioms(C))
    for map_name, entry, h in _hom_entries(ws):
        x = h.element(entry.linmap)
        bound = min(max_arity, h.family.max_arity)
        rep = check_generalized_jacobi(h.family, up_to_arity=bound)
        b.add(
            "homotopy relations on hom(%s, %s) (arity ≤ %d)"
            % (entry.source, entry.target, bound),
            rep["ok"],
            "%d tuples" % rep["checked"],
        )
        res = mc_residual(h.family, x)
        b.add("map %r flat" % map_name, not res.coeffs, _fmt_elem(res.coeffs))
    b.add("canonical dump reparses equal", loads(dumps(ws)) == ws)


@main.command()
@click.argument("target", default="builtin:appendixA")
@click.option("--all", "run_all", is_flag=True, help="Run every applicable suite.")
@click.option("--max-arity", default=4, show_default=True, help="Arity bound for sweeps.")
@click.option("--max-weight", default=4, show_default=True, help="Weight bound for sweeps.")
@click.option("--json", "as_json", is_flag=True, help="Append a JSON report.")
def verify(target, run_all, max_arity, max_weight, as_json):
    """Run the invariant suites on a scenario or workspace file."""
    kind, name, obj = _resolve(target)
    b = Battery()
    if kind == "scenario":
        _verify_scenario(b, name, obj, max_arity)
    else:
        _verify_workspace(b, obj, max_arity, max_weight)
    _finish(b, as_json)


# brackets ---------------------------------------------------------------------


def _bracket_table(g, max_arity):
    rows = []
    bound = min(max_arity, g.max_arity)
    for n in range(1, bound + 1):
        if n == 1:
            for s in g.space.symbols:
                out = eval_bracket(g, 1, [s])
                if out.coeffs:
                    rows.append((1, (s,), out.coeffs))
            continue
        for syms in product(g.space.symbols, repeat=n):
            try:
                out = eval_bracket(g, n, list(syms))
            except TruncationOverflow:
                continue
            if out.coeffs:
                rows.append((n, syms, out.coeffs))
    return rows


@main.command()
@click.argument("target", default="builtin:appendixA")
@click.option("--max-arity", default=2, show_default=True)
@click.option("--twisting", "twisting_name", default=None, help="Twisting morphism name (workspace targets).")
@click.option("--coalgebra", "coalgebra_name", default=None)
@click.option("--algebra", "algebra_name", default=None)
@click.option("--json", "as_json", is_flag=True)
def brackets(target, max_arity, twisting_name, coalgebra_name, algebra_name, as_json):
    """Print the nonzero homotopy brackets of a convolution instance."""
    kind, name, obj = _resolve(target)
    if kind == "scenario":
        g = obj["corners"]["CA"].family
        label = name + " corner CA"
    else:
        ws = obj
        tw = twisting_name or ws.sole("twisting")[0]
        co = coalgebra_name or ws.sole("coalgebras")[0]
        al = algebra_name or ws.sole("algebras")[0]
        h = build_convolution(ws.twisting[tw], ws.coalgebras[co], ws.algebras[al])
        g = h.family
        label = "hom(%s, %s) over %s" % (co, al, tw)
    rows = _bracket_table(g, max_arity)
    click.echo("brackets of %s (arity ≤ %d):" % (label, min(max_arity, g.max_arity)))
    for n, syms, coeffs in rows:
        click.echo("  ℓ_%d(%s) = %s" % (n, ", ".join(syms), _fmt_elem(coeffs)))
    if not rows:
        click.echo("  all zero")
    click.echo("%d nonzero rows" % len(rows))
    if as_json:
        click.echo(json.dumps(
            {
                "label": label,
                "rows": [
                    {"arity": n, "inputs": list(syms),
                     "output": {s: str(Fraction(c)) for s, c in coeffs.items()}}
                    for n, syms, coeffs in rows
                ],
            },
            sort_keys=True, ensure_ascii=False,
        ))
    sys.exit(0)


# mc ----------------------------------------------------------------------------


@main.command()
@click.argument("target", default="builtin:appendixA")
@click.option("--name", "map_name", default=None, help="Check a single named map.")
@click.option("--json", "as_json", is_flag=True)
def mc(target, map_name, as_json):
    """Check flatness of the Maurer–Cartan candidates."""
    kind, name, obj = _resolve(target)
    b = Battery()
    if kind == "scenario":
        if name == "builtin:appendixA":
            pairs = [("sample element", obj["corners"]["CA"].family, obj["f"]),
                     ("postcomposition datum", obj["h_psi"].family, obj["psi"])]
        else:
            pairs = [("postcomposition datum", obj["h_psi"].family, obj["psi"])]
        for label, fam, x in pairs:
            res = mc_residual(fam, x)
            b.add("%s flat" % label, not res.coeffs, _fmt_elem(res.coeffs))
    else:
        picked = _hom_entries(obj, map_name)
        if not picked:
            b.add("no Maurer–Cartan candidates declared", True, "vacuous")
        for mname, entry, h in picked:
            res = mc_residual(h.family, h.element(entry.linmap))
            b.add("map %r flat" % mname, not res.coeffs, _fmt_elem(res.coeffs))
    _finish(b, as_json)


# bijection ---------------------------------------------------------------------


def _bijection_workspace(b, ws, map_name=None):
    picked = _hom_entries(ws, map_name)
    if not picked:
        b.add("no Maurer–Cartan candidates declared", True, "vacuous pass")
        return
    for mname, entry, h in picked:
        f = h.mc(entry.linmap, candidate=True)
        res = mc_residual(h.family, f)
        if not b.add("map %r flat" % mname, not res.coeffs, _fmt_elem(res.coeffs)):
            continue
        alpha = ws.twisting[entry.hom]
        C, A = ws.coalgebras[entry.source], ws.algebras[entry.target]
        W = C.max_weight or 2
        barA = bar(alpha, A, W)
        F = mc_to_coalg_morphism(h, f, barA)
        ok = coalg_morphism_to_mc(h, F).element == f.element
        ok = ok and is_coalgebra_morphism(F, C, barA)
        b.add("map %r coinduction round-trip" % mname, ok)
        try:
            OmC = cobar(alpha, C, W)
            G = mc_to_alg_morphism(h, f, OmC)
            ok = alg_morphism_to_mc(h, G).element == f.element
            ok = ok and is_algebra_morphism(G, OmC, A)
            b.add("map %r free-extension round-trip" % mname, ok)
        except TruncationOverflow:
            b.add("map %r free-extension round-trip" % mname, True,
                  "skipped: target truncation too shallow")


def _bijection_desk(b):
    for inst in scenarios.desk_instances():
        h, f, barA, OmC = inst["h"], inst["f"], inst["barA"], inst["OmC"]
        C = inst["C"]
        F = mc_to_coalg_morphism(h, f, barA)
        ok = is_coalgebra_morphism(F, C, barA)
        ok = ok and coalg_morphism_to_mc(h, F).element == f.element
        b.add("instance %s: flat element ↔ coalgebra morphism" % inst["name"], ok)
        G = mc_to_alg_morphism(h, f, OmC)
        b.add("instance %s: flat element ↔ algebra morphism" % inst["name"],
              alg_morphism_to_mc(h, G).element == f.element)


def _run_bijection(target, map_name, as_json):
    b = Battery()
    if not target:
        _bijection_desk(b)
    else:
        kind, _name, obj = _resolve(target)
        if kind == "scenario":
            _bijection_desk(b)
        else:
            _bijection_workspace(b, obj, map_name)
    _finish(b, as_json)


@main.command()
@click.argument("target", default="")
@click.option("--name", "map_name", default=None, help="Restrict to one named map.")
@click.option("--json", "as_json", is_flag=True)
def bijection(target, map_name, as_json):
    """Round-trip flat elements through both morphism dictionaries."""
    _run_bijection(target, map_name, as_json)


@main.command("mc-roundtrip", hidden=True)
@click.argument("target", default="")
@click.option("--name", "map_name", default=None)
@click.option("--json", "as_json", is_flag=True)
def mc_roundtrip(target, map_name, as_json):
    """Alias of `bijection`."""
    _run_bijection(target, map_name, as_json)


# strictness ----------------------------------------------------------------------


@main.command()
@click.option("--max-arity", default=2, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def strictness(max_arity, as_json):
    """Sweep the one-sided composition actions against the deformation
    brackets on the stock casts."""
    b = Battery()
    up_to = max(2, max_arity)

    rc = scenarios.action_cast_right()
    dg = deformation_family(rc["h"].family, rc["h_target"].family, up_to)
    act = lambda x: hom_r(rc["h"], rc["h_target"], rc["h_def"].as_linmap(x))
    rep = check_strictness(rc["h_def"], act, dg, up_to_arity=up_to, report=True)
    b.add("postcomposition action strict (arity ≤ %d)" % up_to,
          rep["ok"], "%d tuples" % rep["checked"])

    lc = scenarios.action_cast_left()
    dg = deformation_family(lc["h"].family, lc["h_target"].family, up_to)
    act = lambda y: hom_l(lc["h"], lc["h_target"], lc["h_def"].as_linmap(y), lc["OmC"])
    rep = check_strictness(
        lc["h_def"], act, dg, up_to_arity=up_to, pool=lc["pool"], report=True, twist=True
    )
    b.add("precomposition action strict in the twisted dictionary (arity ≤ %d)" % up_to,
          rep["ok"], "%d tuples" % rep["checked"])
    _finish(b, as_json)


# compose ----------------------------------------------------------------------


@main.command()
@click.argument("target", default="builtin:appendixA")
@click.option("--max-arity", default=3, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def compose(target, max_arity, as_json):
    """Apply the two one-sided actions in both orders and compare."""
    kind, name, obj = _resolve(target)
    if kind != "scenario":
        raise click.ClickException("compose targets a builtin scenario")
    b = Battery()
    rep = equalizer_check(
        obj["corners"], obj["phi"], obj["psi"], obj["OmC"], up_to_arity=max_arity
    )
    diff = rep["raw_difference"]
    detail = ""
    if diff:
        detail = "first difference at arity %d on (%s): %s vs %s" % (
            diff["arity"], ", ".join(diff["inputs"]),
            _fmt_elem(diff["lhs"]), _fmt_elem(diff["rhs"]),
        )
    b.add("composite orders compared", True,
          "equal" if rep["raw_equal"] else detail)
    _finish(b, as_json, extra={"raw_equal": rep["raw_equal"],
                               "raw_difference": _difference_row(diff)})


# equalizer -------------------------------------------------------------------


@main.command()
@click.option("--max-weight", default=3, show_default=True,
              help="Interior weight bound for the restricted comparison.")
@click.option("--json", "as_json", is_flag=True)
def equalizer(max_weight, as_json):
    """Compare the two composition orders raw, restricted along the
    resolution counit, and after rectifying the postcomposition datum."""
    cast = scenarios.kappa_equalizer()
    rep = equalizer_check(
        cast["corners"], cast["phi"], cast["psi"], cast["OmC"],
        resolution=cast["resolution"], eps=cast["eps"],
        res_corners=cast["res_corners"], rpsi=cast["rpsi"],
        up_to_arity=2, max_weight=max_weight,
    )
    b = Battery()

    def _describe(tag, equal, diff):
        if equal:
            return "%s orders agree" % tag
        return "%s orders differ at arity %d on (%s): %s vs %s" % (
            tag, diff["arity"], ", ".join(diff["inputs"]),
            _fmt_elem(diff["lhs"]), _fmt_elem(diff["rhs"]),
        )

    b.add("raw orders differ", rep["raw_equal"] is False,
          _describe("raw", rep["raw_equal"], rep["raw_difference"]))
    b.add("restriction along the counit reproduces the disagreement",
          rep["restricted_equal"] is False,
          _describe("restricted", rep["restricted_equal"], rep["restricted_difference"]))
    b.add("rectified datum equalizes the orders", rep["rectified_equal"] is True,
          "both orders agree entry-wise up to weight %d" % max_weight)

    appx = scenarios.appendix_a()
    arep = equalizer_check(appx["corners"], appx["phi"], appx["psi"], appx["OmC"],
                           up_to_arity=3)
    b.add("zero-twist cast: raw orders differ", arep["raw_equal"] is False,
          "order ℓ∘r: 0, order r∘ℓ: w")
    _finish(b, as_json, extra={
        "raw_difference": _difference_row(rep["raw_difference"]),
        "restricted_difference": _difference_row(rep["restricted_difference"]),
        "rectified_equal": rep["rectified_equal"],
    })


# counterexample -----------------------------------------------------------------


@main.command()
@click.option("--json", "as_json", is_flag=True)
def counterexample(as_json):
    """Evaluate the stock zero-twist cast where the composition orders
    give different answers."""
    cast = scenarios.appendix_a()
    T_lr = compose_action("lr", cast["corners"], cast["phi"], cast["psi"], cast["OmC"])
    T_rl = compose_action("rl", cast["corners"], cast["phi"], cast["psi"], cast["OmC"])
    fa = atom(word(IDENTITY, "y"), word(IDENTITY, "z"))
    lr = T_lr.component_symbols(3, (fa, fa, fa))
    rl = T_rl.component_symbols(3, (fa, fa, fa))
    ok = lr == {} and rl == {atom("x", "w"): Fraction(1)}
    click.echo("order ℓ∘r: 0, order r∘ℓ: w — composites differ")
    if not ok:  # pragma: no cover - frozen values
        click.echo("FAIL  frozen composite values drifted: ℓ∘r=%s r∘ℓ=%s"
                   % (_fmt_elem(lr), _fmt_elem(rl)))
    if as_json:
        click.echo(json.dumps(
            {
                "ok": ok,
                "order_lr": {s: str(Fraction(c)) for s, c in lr.items()},
                "order_rl": {s: str(Fraction(c)) for s, c in rl.items()},
                "inputs": [fa, fa, fa],
            },
            sort_keys=True, ensure_ascii=False,
        ))
    sys.exit(0 if ok else 1)


# lemma42 -------------------------------------------------------------------------


@main.command()
@click.option("--max-arity", default=4, show_default=True, help="Largest stage n.")
@click.option("--json", "as_json", is_flag=True)
def lemma42(max_arity, as_json):
    """Decomposition-identity battery over cofree coalgebras, including
    the map-decorated form with seeded random entry maps."""
    rng = random.Random(_seed())
    b = Battery()
    cogen_sets = [
        ("one cogenerator", graded_span("Y", ("y", 0)), 4),
        ("two graded cogenerators", graded_span("Y", ("y0", 0), ("y1", 1)), 3),
        ("three graded cogenerators", graded_span("Y", ("y0", 0), ("y1", 1), ("y2", 2)), 3),
    ]
    coop = as_cooperad(4)
    for label, cog, W in cogen_sets:
        C = cofree_coalgebra(coop, cog, W)
        for n in range(1, max_arity + 1):
            ok, bad = check_decomposition_identity(C, n)
            b.add("%s, stage n=%d: expansions agree" % (label, n),
                  ok, "" if ok else repr(bad[:2]))
        syms = C.space.symbols
        for n in range(1, min(3, max_arity) + 1):
            fs = []
            for _ in range(n):
                entries = {}
                for _ in range(rng.randint(1, 3)):
                    t, s = rng.choice(syms), rng.choice(syms)
                    entries[(t, s)] = entries.get((t, s), 0) + rng.randint(-3, 3)
                fs.append(LinMap(C.space, C.space, entries))
            ok, bad = check_map_form_identity(C, fs, n)
            b.add("%s, map-decorated form with %d random maps" % (label, n),
                  ok, "" if ok else repr(bad[:2]))
    _finish(b, as_json)


if __name__ == "__main__":  # pragma: no cover
    main()
