"""Command-line front end.

Exit codes: 0 success, 1 assertion failure (or a requested analysis the
library could not complete), 2 input error.
"""
from __future__ import annotations

import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import click
import numpy as np

from . import report
from .config import load_config, map_from_config
from .cycles import fixed_point_lemma_check, periodic_orbits
from .errors import ConfigParse, LorenzLabError, UnknownFixture
from .fixtures import load_fixture, parse_point, run_fixture
from .kneading import admissibility_check, kneading_invariant, renorm_factorization
from .lorenzmap import mod_one, orbit
from .markov import build_markov, dynamics_verdict
from .numberfield import FloatField
from .renorm import invariant_set_analysis, matching, search_renorms, validate_renorm
from .rotation import rotation_analysis
from .svg import render_numberline

SCAN_HEADER = (
    "beta",
    "alpha",
    "valid",
    "kappa",
    "nk_cycle",
    "primary",
    "renorm_min_l",
    "renorm_min_r",
    "markov_verdict",
    "matching_eta",
)


class InputError(click.ClickException):
    exit_code = 2


class AnalysisError(click.ClickException):
    exit_code = 1


def _load_map(path):
    try:
        cfg = load_config(path)
        return map_from_config(cfg), cfg
    except ConfigParse as exc:
        raise InputError(str(exc)) from exc
    except LorenzLabError as exc:
        # the config parsed but does not describe an admissible map
        raise InputError(f"{type(exc).__name__}: {exc}") from exc


def _emit(command: str, body: dict, cfg=None, out=None):
    text = report.dumps(report.envelope(command, body, cfg))
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except LorenzLabError as exc:
        raise AnalysisError(f"{type(exc).__name__}: {exc}") from exc


def _orbit_points(f, n_p: int, n_q: int) -> list:
    pts = [(f"p{i}", parse_point(f, {"point": "0", "n": i}), "below") for i in range(1, n_p + 1)]
    pts += [(f"q{i}", parse_point(f, {"point": "1", "n": i}), "above") for i in range(1, n_q + 1)]
    pts.append(("c", parse_point(f, "c"), "critical"))
    return pts


config_arg = click.argument("config", type=click.Path(dir_okay=False))
out_opt = click.option("--out", "-o", type=click.Path(dir_okay=False), default=None, help="Write the report here.")


@click.group()
@click.version_option(package_name="lorenz-lab")
def main():
    """Exact verification toolkit for expanding Lorenz maps."""


@main.command()
@config_arg
@click.option("--horizon", default=200, show_default=True)
@click.option("--lmax", default=10, show_default=True)
@click.option("--rmax", default=10, show_default=True)
@out_opt
def knead(config, horizon, lmax, rmax, out):
    """Kneading invariant, admissibility and renormalizable factorizations."""
    f, cfg = _load_map(config)
    kp, km = _guard(kneading_invariant, f, horizon)
    adm = admissibility_check(kp, km)
    facts = renorm_factorization(kp, km, lmax, rmax)
    body = {
        "k_plus": str(kp),
        "k_minus": str(km),
        "admissibility": {"verdict": adm.verdict, "checked_up_to": adm.checked_up_to, "witness": adm.witness},
        "factorizations": [[x.l, x.r] for x in facts],
    }
    _emit("knead", body, cfg, out)


@main.command("orbit")
@config_arg
@click.option("--point", "point", default="c-", show_default=True, help="0, 1, c-, c+ (or c for a plain point).")
@click.option("--horizon", default=200, show_default=True)
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Number-line diagram of p_i, q_i and c.")
@out_opt
def orbit_cmd(config, point, horizon, svg, out):
    """Sided orbit of a point with recurrence detection."""
    f, cfg = _load_map(config)
    try:
        p = parse_point(f, point)
    except ConfigParse as exc:
        raise InputError(str(exc)) from exc
    res = _guard(orbit, f, p, horizon)
    body = {
        "start": point,
        "points": [q.to_json() for q in res.points],
        "approx": [float(q.value) for q in res.points],
        "recurrent": res.recurrent,
        "preperiod": res.preperiod,
        "period": res.period,
    }
    if svg:
        render_numberline(_guard(_orbit_points, f, 6, 6), svg)
    _emit("orbit", body, cfg, out)


@main.command()
@config_arg
@click.option("--nmax", default=8, show_default=True)
@click.option("--bound", default=12, show_default=True, help="Depth bound for the fixed-point lemma.")
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Diagram of the primary cycle and c.")
@out_opt
def cycles(config, nmax, bound, svg, out):
    """Periodic orbits up to period nmax and n(k)-cycle detection."""
    f, cfg = _load_map(config)
    po = _guard(periodic_orbits, f, nmax)
    body = {"kappa": po.kappa, "n_max": nmax, "orbits": [o.to_json() for o in po.orbits]}
    try:
        lem = fixed_point_lemma_check(f, bound)
        body["fixed_point_lemma"] = {"m": lem.m, "fixed_point": lem.fixed_point.to_json()}
    except LorenzLabError as exc:
        body["fixed_point_lemma"] = {"error": f"{type(exc).__name__}: {exc}"}
    if svg:
        prim = [o for o in po.orbits if o.is_primary]
        pts = [("c", parse_point(f, "c"), "critical")]
        if prim:
            pts += [(f"z{i}", z, "above") for i, z in enumerate(prim[0].points)]
        render_numberline(pts, svg)
    _emit("cycles", body, cfg, out)


@main.command()
@config_arg
@click.option("--lmax", default=10, show_default=True)
@click.option("--rmax", default=10, show_default=True)
@click.option("--horizon", default=200, show_default=True)
@out_opt
def renorm(config, lmax, rmax, horizon, out):
    """All renormalizations (f^l, f^r) in the rectangle with the Pareto-minimal set."""
    f, cfg = _load_map(config)
    rs = _guard(search_renorms, f, lmax, rmax)
    from .renorm import lem_inv_verdict

    items = []
    for g in rs.valid:
        d = g.to_json()
        d["minimal"] = (g.l, g.r) in rs.pareto
        d["lem_inv"] = lem_inv_verdict(f, g, horizon)
        items.append(d)
    body = {
        "renormalizations": items,
        "pareto": [list(p) for p in rs.pareto],
        "unique_minimum": list(rs.unique_minimum) if rs.unique_minimum else None,
        "failures": {f"{l},{r}": reason for (l, r), reason in sorted(rs.failures.items())},
    }
    _emit("renorm", body, cfg, out)


@main.command()
@config_arg
@click.option("--l", "l", type=int, required=True)
@click.option("--r", "r", type=int, required=True)
@click.option("--depth", default=12, show_default=True)
@click.option("--samples", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--horizon", default=200, show_default=True)
@out_opt
def invariants(config, l, r, depth, samples, seed, horizon, out):
    """Complete-invariance verdict and F_g / J_g sample classification for (l, r)."""
    f, cfg = _load_map(config)
    g = _guard(validate_renorm, f, l, r)
    rep = _guard(invariant_set_analysis, f, g, depth, samples=samples, seed=seed, horizon=horizon)
    _emit("invariants", {"renormalization": g.to_json(), **rep.to_json()}, cfg, out)


@main.command()
@config_arg
@click.option("--horizon", default=200, show_default=True)
@out_opt
def markov(config, horizon, out):
    """Markov partition from the critical orbits, transition matrix and verdict."""
    f, cfg = _load_map(config)
    m = _guard(build_markov, f, horizon)
    v = dynamics_verdict(m)
    _emit("markov", {**m.to_json(), **v.to_json()}, cfg, out)


@main.command()
@config_arg
@click.option("--n-iter", default=1000, show_default=True)
@click.option("--samples", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--nmax", default=8, show_default=True, help="Search bound for a primary cycle.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Per-sample CSV.")
@out_opt
def rotation(config, n_iter, samples, seed, nmax, csv_path, out):
    """Rotation-number estimates for random samples and the degeneracy verdict."""
    f, cfg = _load_map(config)
    po = _guard(periodic_orbits, f, nmax)
    prim = [o for o in po.orbits if o.is_primary]
    xs = list(np.random.default_rng(seed).random(samples))
    rep = rotation_analysis(f, xs, n_iter, cycle=prim[0] if prim else None)
    if csv_path:
        with open(csv_path, "w") as fh:
            fh.write(report.csv_text(("sample", "n_iter", "m_n", "estimate", "exact"), rep.rows()))
    body = {
        "n_iter": n_iter,
        "samples": samples,
        "interval": list(rep.interval),
        "verdict": rep.verdict,
        "value": None if rep.value is None else str(rep.value),
        "nonconverged": rep.nonconverged,
        "estimates": rep.estimates().tolist(),
    }
    _emit("rotation", body, cfg, out)


@main.command("matching")
@config_arg
@click.option("--eta-max", default=200, show_default=True)
@out_opt
def matching_cmd(config, eta_max, out):
    """Least eta with f^eta(c_-) = f^eta(c_+)."""
    f, cfg = _load_map(config)
    m = _guard(matching, f, eta_max)
    _emit("matching", {"eta": m.eta, "eta_max": m.eta_max, "next_split": m.next_split}, cfg, out)


@main.command("verify-example")
@click.argument("ref")
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Orbit diagram of the fixture.")
@out_opt
def verify_example(ref, svg, out):
    """Run the assertions of a bundled fixture (by id) or of a fixture JSON file."""
    try:
        case = load_fixture(ref)
        results = run_fixture(case)
    except (ConfigParse, UnknownFixture) as exc:
        raise InputError(str(exc)) from exc
    except LorenzLabError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc
    ok = all(r.passed for r in results)
    body = {
        "id": case.id,
        "title": case.title,
        "status": "PASS" if ok else "FAIL",
        "passed": sum(r.passed for r in results),
        "total": len(results),
        "assertions": [r.to_json() for r in results],
    }
    if svg:
        _fixture_svg(case, svg)
    _emit("verify-example", body, case.config, out)
    for r in results:
        click.echo(f"{'PASS' if r.passed else 'FAIL'} {case.id}: {r.name} [{r.provenance}]", err=True)
    if not ok:
        sys.exit(1)


def _fixture_svg(case, path):
    f = map_from_config(case.config)
    order = [a for a in case.assertions if a["op"] == "order"]
    if order:
        pts = [(lab, parse_point(f, spec), *rest) for lab, spec, *rest in order[0]["args"]["points"]]
        pts = [(p[0], p[1], p[2] if len(p) > 2 else "above") for p in pts]
    else:
        pts = _orbit_points(f, 6, 6)
    prim = [o for o in periodic_orbits(f, 6).orbits if o.is_primary]
    if prim:
        pts += [(f"z{i}", z, "below") for i, z in enumerate(prim[0].points)]
    render_numberline(pts, path, title=case.title)


# ---------------------------------------------------------------------------
# parameter scan


def _parse_range(text: str, name: str):
    try:
        lo, hi = (Fraction(s) for s in text.split(":"))
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"expected lo:hi, got {text!r}", param_hint=name) from exc
    if hi < lo:
        raise click.BadParameter("hi < lo", param_hint=name)
    return lo, hi


def _grid_values(lo: Fraction, hi: Fraction, n: int) -> list:
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * Fraction(i, n - 1) for i in range(n)]


def scan_horizon(beta: float, bits: int, horizon: int) -> int:
    """Orbit length that float intervals of the given precision can follow.

    Interval widths grow like beta^n, so past about (bits - 32)/log2(beta)
    steps every value becomes indistinguishable from every other.
    """
    if beta <= 1:
        return horizon
    return max(1, min(horizon, int((bits - 32) / math.log2(beta))))


def _scan_cell(task) -> dict:
    beta, alpha, bits, nmax, lmax, rmax, horizon = task
    row = {"beta": f"{float(beta):.10g}", "alpha": f"{float(alpha):.10g}", "valid": "false"}
    K = FloatField(bits)
    try:
        f = mod_one(K, K(beta), K(alpha))
    except LorenzLabError:
        return row
    row["valid"] = "true"
    h = scan_horizon(float(beta), bits, horizon)
    try:
        po = periodic_orbits(f, nmax)
        row["kappa"] = po.kappa
        nks = [o for o in po.orbits if o.nk is not None]
        prim = [o for o in nks if o.is_primary]
        pick = prim[0] if prim else (nks[0] if nks else None)
        if pick is not None:
            row["nk_cycle"] = f"{pick.nk.n}({pick.nk.k})"
        row["primary"] = "true" if prim else "false"
    except LorenzLabError as exc:
        row["kappa"] = f"error:{type(exc).__name__}"
    try:
        rs = search_renorms(f, lmax, rmax)
        best = rs.unique_minimum or (rs.pareto[0] if rs.pareto else None)
        if best:
            row["renorm_min_l"], row["renorm_min_r"] = best
    except LorenzLabError:
        pass
    try:
        row["markov_verdict"] = dynamics_verdict(build_markov(f, h)).verdict
    except LorenzLabError as exc:
        row["markov_verdict"] = {"NotEventuallyPeriodic": "none"}.get(type(exc).__name__, "undecided")
    try:
        m = matching(f, h)
        row["matching_eta"] = m.eta
    except LorenzLabError:
        pass
    return row


@main.command()
@click.option("--grid", default="50x50", show_default=True, help="Number of beta and alpha values, e.g. 50x50.")
@click.option("--beta", "beta_range", default="1:2", show_default=True)
@click.option("--alpha", "alpha_range", default="0:1", show_default=True)
@click.option("--float-bits", default=128, show_default=True)
@click.option("--nmax", default=6, show_default=True)
@click.option("--lmax", default=10, show_default=True)
@click.option("--rmax", default=10, show_default=True)
@click.option("--horizon", default=200, show_default=True)
@click.option("--workers", default=0, help="Worker processes (0 = one per CPU).")
@out_opt
def scan(grid, beta_range, alpha_range, float_bits, nmax, lmax, rmax, horizon, workers, out):
    """Classify the ModOne maps on a (beta, alpha) grid; one CSV row per grid cell in grid order."""
    try:
        nb, na = (int(s) for s in grid.lower().split("x"))
    except ValueError as exc:
        raise click.BadParameter(f"expected NxM, got {grid!r}", param_hint="--grid") from exc
    if nb < 1 or na < 1:
        raise click.BadParameter("grid sizes must be positive", param_hint="--grid")
    if float_bits < 64:
        raise click.BadParameter("need at least 64 bits", param_hint="--float-bits")
    betas = _grid_values(*_parse_range(beta_range, "--beta"), nb)
    alphas = _grid_values(*_parse_range(alpha_range, "--alpha"), na)
    tasks = [(b, a, float_bits, nmax, lmax, rmax, horizon) for b in betas for a in alphas]
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(tasks) == 1:
        rows = [_scan_cell(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_scan_cell, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    text = report.csv_text(SCAN_HEADER, rows)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":  # pragma: no cover
    main()
