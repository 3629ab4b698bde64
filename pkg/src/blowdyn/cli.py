"""Command-line surface: map-description files in, JSON reports and CSV
traces out.

A map description is a JSON object:

    {
      "schema": "blowdyn/1",              // optional on input
      "dim": 2,
      "blocks": [{"mu": 2, "lambda": "1"}],
      "terms": [{"j": 2, "exp": [2, 0], "coeff": "1"}],
      "options": {"degree_cap": 4, "precision_bits": 128, "field": "exact"}
    }

The linear part is implied by the blocks; a degree-1 entry in `terms` is
only accepted when it restates the implied matrix exactly.  Coefficients
are exact literals ("-3/4", "1/2+1/3i", "0.25" — decimals convert
exactly).  Every command prints JSON on stdout (except the CSV the orbit
command writes) and, on failure, a machine-readable error object on
stderr: exit code 2 for description/schema problems, 1 for any other
declared error, 3 for unexpected ones.
"""

import csv
import json
import sys

import click
import mpmath

from . import dynamics
from .blowup import projection_formulas
from .errors import BlowdynError, JordanMismatch, SchemaError
from .lifting import (
    LiftedMap,
    germ_from_terms,
    jordan_matrix,
    lift,
    lifted_quadratic_part,
    verify_semiconjugacy,
)
from .normalform import epsilon_vector, invariants_2d, normal_form
from .partition import build_structure, splitting
from .scalars import RATIONAL, GaussianRational, parse_scalar
from .series import PolyMapGerm, TruncatedSeries

SCHEMA = "blowdyn/1"


# -- scalar/JSON plumbing --------------------------------------------------

def jval(x, bits=None):
    """JSON form of a scalar: exact values as strings, floats as full
    precision decimals (with the bit count when it is declared)."""
    if isinstance(x, GaussianRational):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return str(GaussianRational(x))
    if isinstance(x, complex):
        return {"re": repr(x.real), "im": repr(x.imag)}
    if isinstance(x, float):
        return {"re": repr(x), "im": "0.0"}
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        b = bits or mpmath.mp.prec
        digits = int(b * 0.30103) + 3
        z = mpmath.mpc(x)
        return {
            "re": mpmath.nstr(z.real, digits),
            "im": mpmath.nstr(z.imag, digits),
            "bits": b,
        }
    if x is None:
        return None
    return str(x)


def _structure_json(S):
    return {
        "n": S.n,
        "mu": list(S.mu),
        "lambda": [jval(x) for x in S.lam],
        "nu": list(S.nu),
        "rho": S.rho,
        "stages": S.ell,
    }


def _direction_json(d):
    out = {
        "v": [jval(x) for x in d.v],
        "lambda": jval(d.lam),
        "degenerate": d.degenerate,
        "allowable": d.allowable,
        "mode": d.mode,
    }
    if d.mode == "numeric":
        out["residual"] = d.residual
    if d.hakim_spectrum is not None:
        out["attraction_spectrum"] = [jval(x) for x in d.hakim_spectrum]
    return out


def _emit(payload):
    click.echo(json.dumps(payload, indent=2))


def _fail(exc):
    payload = {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}
    step = getattr(exc, "step", None)
    if step is not None:
        payload["step"] = step
    stage = getattr(exc, "stage", None)
    if stage is not None:
        payload["stage"] = stage
    click.echo(json.dumps(payload), err=True)
    code = 2 if isinstance(exc, SchemaError) else 1
    sys.exit(code)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except BlowdynError as exc:
        _fail(exc)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        _fail(SchemaError(str(exc)))


# -- map description parsing ----------------------------------------------

def _expect(cond, message):
    if not cond:
        raise SchemaError(message)


def parse_map_spec(data):
    """Validated input germ from a parsed map-description object.

    Returns (germ, options) where options carries degree_cap,
    precision_bits and field after defaulting.
    """
    _expect(isinstance(data, dict), "top level must be a JSON object")
    tag = data.get("schema")
    _expect(tag in (None, SCHEMA), "unknown schema tag %r" % (tag,))
    dim = data.get("dim")
    _expect(isinstance(dim, int) and dim >= 1, "dim must be a positive integer")
    blocks = data.get("blocks")
    _expect(isinstance(blocks, list) and blocks, "blocks must be a nonempty list")
    mus, lams = [], []
    for i, b in enumerate(blocks):
        _expect(isinstance(b, dict), "blocks[%d] must be an object" % i)
        mu = b.get("mu")
        _expect(isinstance(mu, int) and mu >= 1,
                "blocks[%d].mu must be a positive integer" % i)
        mus.append(mu)
        try:
            lams.append(parse_scalar(b.get("lambda", "1")))
        except BlowdynError as exc:
            raise SchemaError("blocks[%d].lambda: %s" % (i, exc))
    _expect(sum(mus) == dim, "block sizes sum to %d, dim says %d"
            % (sum(mus), dim))
    S = build_structure(tuple(mus), tuple(lams))
    opts = data.get("options") or {}
    _expect(isinstance(opts, dict), "options must be an object")
    field = opts.get("field", "exact")
    _expect(field == "exact", "only the exact coefficient field is supported")
    raw_terms = data.get("terms") or []
    _expect(isinstance(raw_terms, list), "terms must be a list")
    J = jordan_matrix(S)
    terms = {}
    maxdeg = 2
    for i, t in enumerate(raw_terms):
        _expect(isinstance(t, dict), "terms[%d] must be an object" % i)
        j = t.get("j")
        _expect(isinstance(j, int) and 1 <= j <= dim,
                "terms[%d].j must be in 1..%d" % (i, dim))
        e = t.get("exp")
        _expect(isinstance(e, list) and len(e) == dim
                and all(isinstance(p, int) and p >= 0 for p in e),
                "terms[%d].exp must be %d nonnegative integers" % (i, dim))
        deg = sum(e)
        _expect(deg >= 1, "terms[%d] has total degree 0" % i)
        try:
            c = parse_scalar(t.get("coeff", "1"))
        except BlowdynError as exc:
            raise SchemaError("terms[%d].coeff: %s" % (i, exc))
        if deg == 1:
            h = e.index(1)
            want = J[j - 1][h]
            if c != want:
                raise JordanMismatch(
                    "linear term (component %d, variable %d) is %s but the "
                    "declared blocks require %s" % (j, h + 1, c, want))
            continue
        maxdeg = max(maxdeg, deg)
        key = (j, tuple(e))
        terms[key] = terms.get(key, GaussianRational(0)) + c
    cap = opts.get("degree_cap", maxdeg)
    _expect(isinstance(cap, int) and cap >= 2, "degree_cap must be an integer >= 2")
    _expect(cap >= maxdeg, "degree_cap %d below a declared term of degree %d"
            % (cap, maxdeg))
    prec = opts.get("precision_bits", 128)
    _expect(isinstance(prec, int) and prec >= 24,
            "precision_bits must be an integer >= 24")
    germ = germ_from_terms(S, terms, cap=cap)
    options = {"degree_cap": cap, "precision_bits": prec, "field": field}
    return germ, options


def load_map_spec(path):
    with open(path) as fh:
        data = json.load(fh)
    return parse_map_spec(data)


# -- lifted-map serialization ---------------------------------------------

def lifted_map_to_json(L):
    comps = []
    for s in L.series.components:
        comps.append([
            {"exp": list(e), "coeff": jval(c)}
            for e, c in sorted(s.coeffs.items())
        ])
    return {
        "schema": SCHEMA,
        "kind": "lifted-map",
        "structure": {
            "mu": list(L.structure.mu),
            "lambda": [jval(x) for x in L.structure.lam],
        },
        "stage": L.stage,
        "degree_cap": L.cap,
        "components": comps,
    }


def lifted_map_from_json(data):
    _expect(isinstance(data, dict) and data.get("kind") == "lifted-map",
            "not a lifted-map object")
    _expect(data.get("schema") == SCHEMA, "unknown schema tag")
    st = data["structure"]
    S = build_structure(tuple(st["mu"]),
                        tuple(parse_scalar(x) for x in st["lambda"]))
    stage = data["stage"]
    cap = data["degree_cap"]
    comps = []
    for rows in data["components"]:
        coeffs = {}
        for row in rows:
            coeffs[tuple(row["exp"])] = parse_scalar(row["coeff"])
        comps.append(TruncatedSeries(S.n, cap, RATIONAL, coeffs))
    return LiftedMap(
        structure=S, stage=stage, cap=cap, series=PolyMapGerm(comps),
        formulas=projection_formulas(S, stage),
    )


# -- shared option helpers -------------------------------------------------

def _parse_int_list(text, what):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise SchemaError("%s must be a comma-separated integer list" % what)


def _parse_scalar_list(text, what):
    out = []
    for tok in text.split(","):
        try:
            out.append(parse_scalar(tok))
        except BlowdynError as exc:
            raise SchemaError("%s entry %r: %s" % (what, tok, exc))
    return tuple(out)


def _structure_from_flags(mu_text, lam_text):
    mus = _parse_int_list(mu_text, "--mu")
    lams = _parse_scalar_list(lam_text, "--lambda") if lam_text else \
        tuple(GaussianRational(1) for _ in mus)
    _expect(len(lams) == len(mus), "--mu and --lambda disagree on block count")
    return build_structure(mus, lams)


# -- commands --------------------------------------------------------------

@click.group()
def main():
    """Blow-up diagonalization of germs with non-diagonalizable linear
    part, and the orbit analysis built on top of it."""


@main.command("partition")
@click.option("--mu", "mu_text", required=True,
              help="Comma-separated block sizes, largest first.")
@click.option("--lambda", "lam_text", default="",
              help="Comma-separated block eigenvalues (default all 1).")
def partition_cmd(mu_text, lam_text):
    """Jordan structure and the stage-by-stage index splittings."""
    def run():
        S = _structure_from_flags(mu_text, lam_text)
        sp = []
        for k in range(0, S.ell + 1):
            s = splitting(S, k)
            sp.append({
                "k": k,
                "primed": list(s.primed),
                "double_primed": list(s.double_primed),
                "per_block": [list(b) for b in s.per_block],
            })
        _emit({"schema": SCHEMA, "structure": _structure_json(S),
               "splittings": sp})
    _guard(run)


@main.command("charts")
@click.option("--mu", "mu_text", required=True)
@click.option("--lambda", "lam_text", default="")
@click.option("--stage", type=int, default=None,
              help="Restrict to one stage (default: all).")
def charts_cmd(mu_text, lam_text, stage):
    """Monomial tables of the chart projections (forward and inverse)."""
    def run():
        S = _structure_from_flags(mu_text, lam_text)
        stages = [stage] if stage is not None else list(range(1, S.ell + 1))
        tables = []
        for k in stages:
            pf = projection_formulas(S, k)
            tables.append({
                "k": k,
                "forward": [list(r) for r in pf.forward],
                "inverse": [list(r) for r in pf.inverse],
                "required_nonzero": list(pf.required_nonzero),
            })
        _emit({"schema": SCHEMA, "structure": _structure_json(S),
               "charts": tables})
    _guard(run)


@main.command("lift")
@click.option("--map", "map_path", required=True, type=str)
@click.option("--stage", type=int, required=True)
@click.option("--degree", type=int, default=None,
              help="Series cap for the lift (default: the input cap).")
@click.option("--out", "out_path", default=None,
              help="Write the lifted map JSON here instead of stdout.")
def lift_cmd(map_path, stage, degree, out_path):
    """Lift the germ through the first `stage` blow-ups."""
    def run():
        F, opts = load_map_spec(map_path)
        D = degree if degree is not None else opts["degree_cap"]
        L = lift(F, stage, D)
        payload = lifted_map_to_json(L)
        payload["semiconjugacy_exact"] = verify_semiconjugacy(F, L)
        if out_path:
            with open(out_path, "w") as fh:
                json.dump(payload, fh, indent=2)
            _emit({"schema": SCHEMA, "written": out_path,
                   "stage": stage, "degree_cap": D,
                   "semiconjugacy_exact": payload["semiconjugacy_exact"]})
        else:
            _emit(payload)
    _guard(run)


@main.command("chardirs")
@click.option("--map", "map_path", required=True, type=str)
@click.option("--mode", type=click.Choice(
    ["auto", "exact2d", "structured", "numeric"]), default="auto")
def chardirs_cmd(map_path, mode):
    """Fixed directions of the fully lifted quadratic part, with
    multipliers, allowability and attraction spectra."""
    def run():
        F, opts = load_map_spec(map_path)
        S = F.structure
        L = lift(F, S.ell, max(2, opts["degree_cap"]))
        Q = lifted_quadratic_part(L)
        stats = {}
        dirs = dynamics.characteristic_directions(
            Q, mode=mode, structure=S, stats=stats)
        out = []
        for d in dirs:
            allow = d.allowable
            if allow is None:
                allow = bool(dynamics.allowable_filter([d], S))
            entry = _direction_json(d)
            entry["allowable"] = bool(allow)
            if not d.degenerate and entry.get("attraction_spectrum") is None:
                try:
                    h = dynamics.hakim_matrix(Q, d.v)
                    entry["attraction_spectrum"] = [jval(x) for x in h.spectrum]
                except BlowdynError as exc:
                    entry["attraction_spectrum"] = None
                    entry["attraction_note"] = str(exc)
            out.append(entry)
        payload = {"schema": SCHEMA, "structure": _structure_json(S),
                   "stage": S.ell, "mode": mode, "directions": out}
        if stats:
            payload["numeric_stats"] = stats
        _emit(payload)
    _guard(run)


@main.command("invariants")
@click.option("--map", "map_path", required=True, type=str)
def invariants_cmd(map_path):
    """Planar refined invariants and the curve-count classification for
    2D germs whose leading quadratic coefficient vanishes."""
    def run():
        F, _ = load_map_spec(map_path)
        inv = invariants_2d(F)
        rep = dynamics.parabolic_classification(F)
        _emit({
            "schema": SCHEMA,
            "epsilon": jval(inv.epsilon),
            "eta": jval(inv.eta),
            "xi": jval(inv.xi) if inv.xi is not None else None,
            "kind": rep.kind,
            "curves": rep.curves,
            "stage": rep.stage,
            "directions": [_direction_json(d) for d in rep.directions],
            "notes": list(rep.notes),
        })
    _guard(run)


@main.command("orbit")
@click.option("--map", "map_path", required=True, type=str)
@click.option("--start", "start_text", required=True,
              help="Comma-separated exact coordinates of the start point.")
@click.option("--steps", type=int, required=True)
@click.option("--prec", type=int, default=128, help="Working precision, bits.")
@click.option("--csv", "csv_path", required=True)
@click.option("--k0", type=int, default=0,
              help="Index label of the start point in the CSV.")
@click.option("--radius", type=float, default=dynamics.DEFAULT_RADIUS)
def orbit_cmd(map_path, start_text, steps, prec, csv_path, k0, radius):
    """Iterate the germ and write the trace as CSV (columns k, then
    re/im per coordinate, full precision)."""
    def run():
        F, _ = load_map_spec(map_path)
        z0 = _parse_scalar_list(start_text, "--start")
        _expect(len(z0) == F.structure.n,
                "--start needs %d coordinates" % F.structure.n)
        trace = dynamics.orbit_iterate(F, z0, steps, precision_bits=prec,
                                       radius=radius)
        digits = int(prec * 0.30103) + 3
        with open(csv_path, "w", newline="") as fh:
            wr = csv.writer(fh)
            head = ["k"]
            for j in range(1, trace.n + 1):
                head += ["re_z%d" % j, "im_z%d" % j]
            wr.writerow(head)
            with mpmath.workprec(prec):
                for i, z in enumerate(trace.points):
                    row = [k0 + i]
                    for x in z:
                        row.append(mpmath.nstr(mpmath.mpf(x.real), digits))
                        row.append(mpmath.nstr(mpmath.mpf(x.imag), digits))
                    wr.writerow(row)
        _emit({
            "schema": SCHEMA, "csv": csv_path, "points": len(trace.points),
            "precision_bits": prec, "k0": k0,
            "diverged": trace.diverged, "diverged_at": trace.diverged_at,
        })
    _guard(run)


@main.command("classify")
@click.option("--map", "map_path", required=True, type=str)
@click.option("--csv", "csv_path", required=True,
              help="Trace written by the orbit command.")
@click.option("--tau", type=float, default=None,
              help="Direction Cauchy threshold (default %g)."
              % dynamics.DIRECTION_TOL)
@click.option("--window", type=int, default=None,
              help="Samples per verdict window (default %d)."
              % dynamics.REG_WINDOW)
def classify_cmd(map_path, csv_path, tau, window):
    """Stage-by-stage regularity verdicts for a stored orbit trace."""
    def run():
        F, _ = load_map_spec(map_path)
        n = F.structure.n
        pts, ks = [], []
        with open(csv_path) as fh:
            rd = csv.reader(fh)
            head = next(rd, None)
            _expect(head is not None and head[:1] == ["k"]
                    and len(head) == 1 + 2 * n,
                    "CSV header does not match a %d-coordinate trace" % n)
            for row in rd:
                ks.append(int(row[0]))
                z = []
                for j in range(n):
                    z.append(complex(float(row[1 + 2 * j]),
                                     float(row[2 + 2 * j])))
                pts.append(tuple(z))
        _expect(bool(pts), "empty trace")
        _expect(all(b - a == 1 for a, b in zip(ks, ks[1:])),
                "CSV k column must increase by 1")
        trace = dynamics.OrbitTrace(
            points=tuple(pts), precision_bits=53, source=F,
            zero_flags=tuple(any(not x for x in z) for z in pts),
        )
        rep = dynamics.regularity_classify(
            trace, F.structure, k0=ks[0], tau=tau, window=window)
        payload = {
            "schema": SCHEMA,
            "classification": rep.classification,
            "standard": rep.standard,
            "match_distance": rep.match_distance,
            "matched_direction": None if rep.matched_direction is None
            else _direction_json(rep.matched_direction),
            "verdicts": [
                {
                    "stage": v.stage,
                    "verdict": v.verdict,
                    "limit": None if v.limit is None
                    else [jval(x) for x in v.limit],
                    "note": v.note,
                }
                for v in rep.verdicts
            ],
            "notes": list(rep.notes),
        }
        _emit(payload)
    _guard(run)


@main.command("normalform")
@click.option("--map", "map_path", required=True, type=str)
def normalform_cmd(map_path):
    """Quadratic normal form for a germ whose linear part is the
    unipotent Jordan block, with the epsilon table and conjugator."""
    def run():
        F, _ = load_map_spec(map_path)
        nf = normal_form(F)
        def germ_terms(g):
            out = []
            for j, s in enumerate(g.components, start=1):
                for e, c in sorted(s.coeffs.items()):
                    out.append({"j": j, "exp": list(e), "coeff": jval(c)})
            return out
        _emit({
            "schema": SCHEMA,
            "epsilon_table": [[jval(x) for x in row] for row in nf.epsilon],
            "epsilon_vector": [jval(x) for x in epsilon_vector(nf)],
            "alpha": [jval(x) for x in nf.alpha],
            "j0": nf.j0,
            "normalized": germ_terms(nf.normalized),
            "conjugator": germ_terms(nf.conjugator),
        })
    _guard(run)


@main.command("fatou-demo")
@click.option("--steps", type=int, default=2500,
              help="Forward steps for the refined standard orbit.")
@click.option("--settle", type=int, default=10000,
              help="Backward refinement steps for the standard seed.")
@click.option("--prec", type=int, default=128)
def fatou_demo_cmd(steps, settle, prec):
    """End-to-end run of the classical planar example (z1+z2, z2+z1^2):
    lift, fixed directions, decay profile, orbits, fits, classification."""
    def run():
        lines = []

        def row(status, name, detail=""):
            lines.append((status, name, detail))

        S = build_structure((2,), (GaussianRational(1),))
        F = germ_from_terms(S, {(2, (2, 0)): GaussianRational(1)}, cap=4)
        for k in (1, 2):
            L = lift(F, k, 4)
            ok = verify_semiconjugacy(F, L)
            row("PASS" if ok else "FAIL",
                "stage-%d lift semiconjugacy exact" % k)
        L = lift(F, 2, 4)
        Q = lifted_quadratic_part(L)
        dirs = dynamics.characteristic_directions(Q, mode="structured",
                                                  structure=S)
        d = dirs[0]
        row("PASS" if tuple(d.v) == (GaussianRational(3), GaussianRational(2))
            else "FAIL", "allowable direction [3:2]",
            "v=(%s, %s) multiplier %s" % (d.v[0], d.v[1], d.lam))
        h = dynamics.hakim_matrix(Q, d.v)
        row("INFO", "attraction spectrum at the direction",
            ", ".join(str(x) for x in h.spectrum)
            + " (no positive real part: curve only, no open basin)")
        rows = dynamics.expected_asymptotics(F)
        row("PASS" if [(r.exponent, str(r.constant)) for r in rows]
            == [(2, "6"), (3, "-12")] else "FAIL",
            "predicted decay 6/k^2, -12/k^3")

        k0 = 50
        raw = dynamics.profile_point(F, k0, precision_bits=prec)
        traw = dynamics.orbit_iterate(F, raw, 5000, precision_bits=prec)
        if traw.diverged:
            row("FAIL", "literal profile seed tracks 5000 steps",
                "escaped the radius at step %d: the modes transverse to the "
                "curve repel, so the truncated profile cannot persist"
                % traw.diverged_at)
        else:
            row("PASS", "literal profile seed tracks 5000 steps")

        seed = dynamics.standard_orbit_seed(F, k0=k0, settle=settle,
                                            precision_bits=prec)
        tr = dynamics.orbit_iterate(F, seed, steps, precision_bits=prec)
        if tr.diverged:
            row("FAIL", "refined standard orbit stays bounded",
                "escaped at step %s" % tr.diverged_at)
            _print_table(lines)
            return
        f1 = dynamics.asymptotic_fit(tr, 1, window=400, k0=k0)
        f2 = dynamics.asymptotic_fit(tr, 2, window=400, k0=k0)
        ok = (abs(f1.exponent_fitted - 2) <= 0.02
              and abs(f2.exponent_fitted - 3) <= 0.02)
        row("PASS" if ok else "FAIL", "fitted exponents 2 and 3 (+-0.02)",
            "%.4f, %.4f" % (f1.exponent_fitted, f2.exponent_fitted))
        ok = (abs(f1.constant - 6) / 6 < 0.05
              and abs(f2.constant + 12) / 12 < 0.05)
        row("PASS" if ok else "FAIL", "fitted constants 6 and -12 (+-5%)",
            "%.4f, %.4f" % (f1.constant.real, f2.constant.real))
        rep = dynamics.regularity_classify(tr, S, k0=k0)
        ok = rep.classification == "standard" and (
            rep.match_distance is not None and rep.match_distance < 1e-4)
        row("PASS" if ok else "FAIL",
            "classified standard, direction match < 1e-4",
            "%s, distance %.3g" % (rep.classification,
                                   rep.match_distance or float("nan")))
        _print_table(lines)
    _guard(run)


def _print_table(lines):
    width = max(len(name) for _, name, _ in lines)
    for status, name, detail in lines:
        pad = name.ljust(width)
        click.echo("%-4s  %s%s" % (status, pad,
                                   ("  -- " + detail) if detail else ""))


if __name__ == "__main__":
    main()
