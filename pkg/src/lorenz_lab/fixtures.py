"""Fixture cases: a map config plus expected assertions with provenance tags.

Every assertion names one check op. The op calls the library, returns what
it observed, and the observation is compared with ``expect`` (floats within
``tol``, dicts on the keys present in ``expect``). Results of the pure library
calls are memoized per (config, op, args), so re-running a fixture with a
different expectation is cheap.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .config import map_from_config
from .cycles import fixed_point_lemma_check, periodic_orbits, periodic_points
from .errors import ConfigParse, LorenzLabError, UnknownFixture
from .kneading import KneadingWord, admissibility_check, kneading_invariant
from .lorenzmap import LorenzMap, iterate_sided, preimages
from .markov import build_markov, dynamics_verdict
from .renorm import (
    invariant_set_analysis,
    lem_inv_verdict,
    matching,
    renorm_from_invariant_set,
    search_renorms,
    validate_renorm,
)
from .rotation import rotation_analysis
from .sided import MINUS, PLUS, SidedPoint, sided_cmp
from .svg import numberline_layout

FIXTURE_IDS = ("ex51", "exOandD", "ex3", "ex4", "ex5_2", "exCubeRoot2")
PROVENANCE = ("PAPER", "DERIVED", "TRIVIAL")

__all__ = ["FIXTURE_IDS", "FixtureCase", "AssertionResult", "load_fixture", "run_fixture", "CHECKS", "order_string", "parse_point"]


@dataclass
class FixtureCase:
    id: str
    title: str
    config: dict
    assertions: list
    source: str = ""

    @classmethod
    def from_dict(cls, data: dict, source: str = "") -> "FixtureCase":
        for key in ("id", "config", "assertions"):
            if key not in data:
                raise ConfigParse(f"fixture is missing {key!r}")
        for a in data["assertions"]:
            if not isinstance(a, dict) or "op" not in a or "expect" not in a:
                raise ConfigParse(f"malformed assertion {a!r}")
            if a["op"] not in CHECKS:
                raise ConfigParse(f"unknown check op {a['op']!r}")
            if a.get("provenance") not in PROVENANCE:
                raise ConfigParse(f"assertion {a.get('name', a['op'])!r} needs a provenance tag in {PROVENANCE}")
        return cls(data["id"], data.get("title", ""), data["config"], data["assertions"], source)


@dataclass
class AssertionResult:
    name: str
    op: str
    provenance: str
    passed: bool
    expect: object
    observed: object
    error: str = ""

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "op": self.op,
            "provenance": self.provenance,
            "passed": self.passed,
            "expect": self.expect,
            "observed": self.observed,
        }
        if self.error:
            out["error"] = self.error
        return out


def load_fixture(ref) -> FixtureCase:
    """Fixture by id (bundled) or by path to a JSON file."""
    ref = str(ref)
    if ref in FIXTURE_IDS:
        text = resources.files("lorenz_lab").joinpath("fixtures").joinpath(f"{ref}.json").read_text()
        source = f"bundled:{ref}"
    else:
        p = Path(ref)
        if not p.suffix == ".json" or not p.exists():
            raise UnknownFixture(f"{ref!r} is neither a fixture id {FIXTURE_IDS} nor an existing .json file")
        text, source = p.read_text(), str(p)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParse(f"fixture {ref}: invalid JSON: {exc}") from exc
    return FixtureCase.from_dict(data, source)


# ---------------------------------------------------------------------------
# point specs: "0", "1", "c", "c-", "c+", or {"point": name, "n": k} for f-hat^k


def parse_point(f: LorenzMap, spec) -> SidedPoint:
    if isinstance(spec, dict):
        return iterate_sided(f, parse_point(f, spec["point"]), int(spec.get("n", 0)))
    names = {
        "0": lambda: SidedPoint(f.ctx.zero),
        "1": lambda: SidedPoint(f.ctx.one),
        "c": lambda: SidedPoint(f.c),
        "c-": lambda: SidedPoint(f.c, MINUS),
        "c+": lambda: SidedPoint(f.c, PLUS),
    }
    if spec not in names:
        raise ConfigParse(f"unknown point {spec!r}")
    return names[spec]()


def _point_label(f: LorenzMap, p: SidedPoint):
    """'c-' / 'c+' / 'c' for copies of c, else the rounded value."""
    if p.value == f.c:
        return {MINUS: "c-", PLUS: "c+"}.get(p.side, "c")
    return round(float(p.value), 10)


def order_string(layout: list) -> str:
    s, prev = "", None
    for item in layout:
        if prev is not None:
            s += "=" if item["rank"] == prev else "<"
        s += item["label"]
        prev = item["rank"]
    return s


def _primary_cycle(f: LorenzMap, n_max: int):
    po = periodic_orbits(f, n_max)
    prim = [o for o in po.orbits if o.is_primary]
    if not prim:
        raise LorenzLabError(f"no primary n(k)-cycle with n <= {n_max}")
    return prim[0]


# ---------------------------------------------------------------------------
# check ops: (f, args) -> observation


def _chk_root(f, args):
    lo, hi = f.ctx.root_interval(int(args.get("bits", 80)))
    return float((lo + hi) / 2)


def _chk_kneading(f, args):
    kp, km = kneading_invariant(f, int(args.get("horizon", 200)))
    return {"k_plus": str(kp), "k_minus": str(km)}


def _chk_admissible(f, args):
    kp, km = kneading_invariant(f, int(args.get("horizon", 200)))
    return admissibility_check(kp, km).verdict


def _chk_iterate_equal(f, args):
    return sided_cmp(parse_point(f, args["a"]), parse_point(f, args["b"])) == 0


def _chk_compare(f, args):
    a = parse_point(f, args["a"]) if "a" in args else None
    b = parse_point(f, args["b"]) if "b" in args else None
    if "cycle_point" in args:
        z = _primary_cycle(f, int(args.get("n_max", 8))).points[int(args["cycle_point"])]
        if a is None:
            a = z
        else:
            b = z
    s = sided_cmp(a, b)
    return "<" if s < 0 else ("=" if s == 0 else ">")


def _chk_plain_orbits(f, args):
    po = periodic_orbits(f, int(args["n_max"]), detect=False)
    return len(po.plain())


def _chk_kappa(f, args):
    po = periodic_orbits(f, int(args.get("n_max", 8)))
    kappa = po.kappa
    orbs = po.of_period(kappa) if kappa is not None else []
    via = sorted({name for o in orbs for name, per in o.projected_periods.items() if per == kappa})
    return {"kappa": kappa, "orbits": len(orbs), "via": via}


def _chk_nk_cycle(f, args):
    o = _primary_cycle(f, int(args.get("n_max", 8)))
    return {
        "n": o.nk.n,
        "k": o.nk.k,
        "primary": o.nk.primary,
        "strict": o.nk.strict,
        "z0": float(o.points[0].value),
        "z0_is_f0": o.points[0].value == f.f0,
    }


def _chk_validate(f, args):
    validate_renorm(f, int(args["l"]), int(args["r"]))
    return True


def _chk_search(f, args):
    rs = search_renorms(f, int(args["l_max"]), int(args["r_max"]))
    return {
        "pairs": [list(p) for p in rs.pairs],
        "pareto": [list(p) for p in rs.pareto],
        "unique_minimum": list(rs.unique_minimum) if rs.unique_minimum else None,
    }


def _chk_lem_inv(f, args):
    g = validate_renorm(f, int(args["l"]), int(args["r"]))
    return lem_inv_verdict(f, g, int(args.get("horizon", 200)))


def _chk_fg_samples(f, args):
    g = validate_renorm(f, int(args["l"]), int(args["r"]))
    rep = invariant_set_analysis(
        f, g, int(args.get("depth", 30)), samples=int(args["samples"]), seed=int(args.get("seed", 0))
    )
    return rep.samples


def _chk_from_invariant_set(f, args):
    o = _primary_cycle(f, int(args.get("n_max", 8)))
    r = renorm_from_invariant_set(f, o.points, int(args.get("depth", 12)))
    return {
        "l": r.l,
        "r": r.r,
        "valid": r.g is not None,
        "invariant": r.invariant,
        "failure_depth": r.failure_depth,
        "witness": None if r.witness is None else _point_label(f, r.witness),
    }


def _chk_preimage_level(f, args):
    """Level at which args.point enters the preimage tree of the primary cycle (or of one cycle point)."""
    o = _primary_cycle(f, int(args.get("n_max", 8)))
    target = list(o.points) if "cycle_point" not in args else [o.points[int(args["cycle_point"])]]
    tree = preimages(f, target, int(args["depth"]))
    return tree.level_of(parse_point(f, args["point"]))


def _chk_mesh(f, args):
    """Preimage-tree mesh of the primary cycle at each depth in [lo, hi]."""
    o = _primary_cycle(f, int(args.get("n_max", 8)))
    lo, hi = args["depths"]
    tree = preimages(f, list(o.points), int(hi))
    meshes = [float(tree.mesh[d]) for d in range(int(lo), int(hi) + 1)]
    return {"decreasing": all(b < a for a, b in zip(meshes, meshes[1:])), "mesh": meshes}


def _chk_matching(f, args):
    m = matching(f, int(args.get("eta_max", 50)))
    return {"eta": m.eta, "next_split": m.next_split}


def _chk_markov(f, args):
    v = dynamics_verdict(build_markov(f, int(args.get("bound", 200))))
    return {"verdict": v.verdict, "witness_verified": v.witness_verified, "period": v.period}


def _chk_spectral_beta(f, args):
    """|spectral radius - beta|."""
    v = dynamics_verdict(build_markov(f, int(args.get("bound", 200))))
    return abs(v.spectral_radius - float(f.params["beta"]))


def _chk_rotation(f, args):
    """Largest deviation of the estimates from the cycle's k/n."""
    n_iter = int(args.get("n_iter", 1000))
    rng = np.random.default_rng(int(args.get("seed", 0)))
    o = _primary_cycle(f, int(args.get("n_max", 8)))
    rep = rotation_analysis(f, list(rng.random(int(args.get("samples", 100)))), n_iter, cycle=o)
    target = float(rep.value)
    return {
        "value": str(rep.value),
        "verdict": rep.verdict,
        "within_2_over_n": bool(np.all(np.abs(rep.estimates() - target) <= 2.0 / n_iter)),
    }


def _chk_periodic_point_in(f, args):
    """A plain point of period args.period inside [a, b] but outside [u, v] (endpoints given as point specs)."""
    a, b = parse_point(f, args["in"][0]), parse_point(f, args["in"][1])
    u, v = parse_point(f, args["not_in"][0]), parse_point(f, args["not_in"][1])
    n = int(args["period"])
    for p in periodic_points(f, n):
        if p.side != 0:
            continue
        if any(sided_cmp(q, p) == 0 for q in periodic_points(f, 1)):
            continue
        inside = sided_cmp(a, p) <= 0 and sided_cmp(p, b) <= 0
        excluded = sided_cmp(u, p) <= 0 and sided_cmp(p, v) <= 0
        if inside and not excluded:
            return True
    return False


def _chk_fixed_point_lemma(f, args):
    return fixed_point_lemma_check(f, int(args.get("bound", 12))).m


def _chk_order(f, args):
    """Exact ordering of labelled orbit points, e.g. "p1<p2<p3=q2"."""
    pts = []
    for item in args["points"]:
        label, spec = item[0], item[1]
        place = item[2] if len(item) > 2 else "above"
        pts.append((label, parse_point(f, spec), place))
    return order_string(numberline_layout(pts))


CHECKS: dict = {
    "root": _chk_root,
    "kneading_invariant": _chk_kneading,
    "admissible": _chk_admissible,
    "iterate_equal": _chk_iterate_equal,
    "compare": _chk_compare,
    "plain_orbit_count": _chk_plain_orbits,
    "kappa": _chk_kappa,
    "nk_cycle": _chk_nk_cycle,
    "validate_renorm": _chk_validate,
    "search_renorms": _chk_search,
    "lem_inv": _chk_lem_inv,
    "F_g_samples": _chk_fg_samples,
    "renorm_from_invariant_set": _chk_from_invariant_set,
    "preimage_level": _chk_preimage_level,
    "preimage_mesh": _chk_mesh,
    "matching": _chk_matching,
    "markov_verdict": _chk_markov,
    "spectral_radius_minus_beta": _chk_spectral_beta,
    "rotation": _chk_rotation,
    "periodic_point_in": _chk_periodic_point_in,
    "fixed_point_lemma": _chk_fixed_point_lemma,
    "order": _chk_order,
}


# ---------------------------------------------------------------------------
# comparison


def _same(observed, expect, tol) -> bool:
    if isinstance(expect, dict):
        return isinstance(observed, dict) and all(k in observed and _same(observed[k], v, tol) for k, v in expect.items())
    if isinstance(expect, bool) or isinstance(observed, bool):
        return observed is expect if isinstance(expect, bool) else False
    if isinstance(expect, (list, tuple)):
        return (
            isinstance(observed, (list, tuple))
            and len(observed) == len(expect)
            and all(_same(o, e, tol) for o, e in zip(observed, expect))
        )
    if isinstance(expect, float) or (tol is not None and isinstance(expect, int)):
        if not isinstance(observed, (int, float)):
            return False
        return math.isclose(observed, expect, rel_tol=0, abs_tol=tol or 0.0)
    return observed == expect


def _same_word(observed: str, expect: str) -> bool:
    try:
        return KneadingWord.parse(observed) == KneadingWord.parse(expect)
    except (ValueError, LorenzLabError):
        return False


_MAPS: dict = {}
_MEMO: dict = {}


def _map_for(config: dict) -> LorenzMap:
    key = json.dumps(config, sort_keys=True)
    if key not in _MAPS:
        _MAPS[key] = map_from_config(config)
    return _MAPS[key]


def _observe(config: dict, op: str, args: dict):
    key = (json.dumps(config, sort_keys=True), op, json.dumps(args, sort_keys=True))
    if key not in _MEMO:
        f = _map_for(config)
        try:
            _MEMO[key] = ("ok", CHECKS[op](f, args))
        except LorenzLabError as exc:
            _MEMO[key] = ("error", f"{type(exc).__name__}: {exc}")
    return _MEMO[key]


def run_assertion(config: dict, a: dict) -> AssertionResult:
    op, args, expect = a["op"], a.get("args", {}), a["expect"]
    tol = a.get("tol")
    status, observed = _observe(config, op, args)
    name = a.get("name", op)
    if status == "error":
        # an expected failure can be asserted with {"error": "ExceptionName"}
        ok = isinstance(expect, dict) and set(expect) == {"error"} and observed.startswith(expect["error"] + ":")
        return AssertionResult(name, op, a["provenance"], ok, expect, None, observed)
    if op == "kneading_invariant" and isinstance(expect, dict):
        ok = isinstance(observed, dict) and all(_same_word(observed.get(k, ""), v) for k, v in expect.items())
    else:
        ok = _same(observed, expect, tol)
    return AssertionResult(name, op, a["provenance"], ok, expect, observed)


def run_fixture(case: FixtureCase) -> list:
    _map_for(case.config)  # config errors surface before any assertion runs
    return [run_assertion(case.config, a) for a in case.assertions]
