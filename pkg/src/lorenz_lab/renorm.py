"""Renormalizations g = (f^l, f^r) and the invariant sets attached to them.

For a pair (l, r) the candidate interval is [u, v] with u = f^r(c_+) and
v = f^l(c_-). The pair is a renormalization when both branches of g stay
continuous on [u, c) and (c, v] and g maps [u, v] into itself as a Lorenz
map. Endpoint values are one-sided limits, so an endpoint whose orbit runs
into c is continued on the side facing the interval (g(u) = f^l(u_+),
g(v) = f^r(v_-)).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import NoPointLeftOfC, NoPointRightOfC, NotLorenz, PeriodicityFailed, RequiresSide
from .lorenzmap import (
    LorenzMap,
    _branch_image,
    eval_sided,
    hitting_time_N,
    inverse_sided,
    orbit,
    preimages,
)
from .sided import MINUS, PLAIN, PLUS, SidedPoint, sided_cmp

__all__ = [
    "Renormalization",
    "validate_renorm",
    "search_renorms",
    "RenormSearch",
    "renorm_from_invariant_set",
    "InvariantSetRenorm",
    "invariant_set_analysis",
    "InvariantSetReport",
    "lem_inv_verdict",
    "classify_point",
    "preimage_closure",
    "matching",
    "Matching",
]


@dataclass
class Renormalization:
    l: int
    r: int
    u: object
    v: object
    u_hat: SidedPoint  # f-hat^r(c_+)
    v_hat: SidedPoint  # f-hat^l(c_-)
    g_u: object  # f^l(u_+)
    g_v: object  # f^r(v_-)
    left_slope: object
    right_slope: object
    expanding: bool
    boundary_convention: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "r": self.r,
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "u_approx": round(float(self.u), 12),
            "v_approx": round(float(self.v), 12),
            "expanding": self.expanding,
            "boundary_convention": self.boundary_convention,
            "valid": True,
        }


def _iterate_side(f: LorenzMap, a, b, n: int):
    """Iterate the open interval (a, b) n times; also report whether an endpoint passed through c."""
    touched = {"left": False, "right": False}
    for i in range(n):
        if a < f.c < b:
            return None, i, touched
        if i > 0:
            touched["left"] |= a == f.c
            touched["right"] |= b == f.c
        a, b = _branch_image(f, a, b)
    return (a, b), n, touched


def validate_renorm(f: LorenzMap, l: int, r: int) -> Renormalization:
    """Check that (f^l, f^r) is a renormalization; raise NotLorenz with a reason otherwise."""
    if l < 2 or r < 2:
        raise ValueError("l and r must be > 1")
    cp, cm = SidedPoint(f.c, PLUS), SidedPoint(f.c, MINUS)
    u_hat = orbit(f, cp, r).at(r)
    v_hat = orbit(f, cm, l).at(l)
    u, v = u_hat.value, v_hat.value
    if not (u < f.c < v):
        raise NotLorenz("interval-degenerate", f"u = {float(u):.8g}, v = {float(v):.8g} do not surround c")
    if u.sign() == 0 and (v - 1).sign() == 0:
        raise NotLorenz("interval-degenerate", "(u, v) is all of (0, 1)")
    left, i, tl = _iterate_side(f, u, f.c, l)
    if left is None:
        raise NotLorenz("continuity-broken", f"c inside f^{i}((u, c)) with i < l = {l}")
    right, j, tr = _iterate_side(f, f.c, v, r)
    if right is None:
        raise NotLorenz("continuity-broken", f"c inside f^{j}((c, v)) with j < r = {r}")
    g_u, v_img = left
    u_img, g_v = right
    if v_img != v or u_img != u:
        raise NotLorenz("order-violated", "critical limits of g differ from the interval endpoints")
    if g_u < u or g_v > v:
        raise NotLorenz(
            "image-escape",
            f"g([u, v]) = [{float(g_u):.8g}, {float(g_v):.8g}] leaves [{float(u):.8g}, {float(v):.8g}]",
        )
    if g_u >= g_v:
        raise NotLorenz("order-violated", "g(u) >= g(v)")
    # slope of f^l on [u, c) is a product of branch slopes along the itinerary
    sl = _slope_along(f, u, f.c, l)
    sr = _slope_along(f, f.c, v, r)
    return Renormalization(
        l,
        r,
        u,
        v,
        u_hat,
        v_hat,
        g_u,
        g_v,
        sl,
        sr,
        bool(sl > 1 and sr > 1),
        {"u_orbit_through_c": tl["left"], "v_orbit_through_c": tr["right"]},
    )


def _slope_along(f: LorenzMap, a, b, n: int):
    s = f.ctx.one
    for _ in range(n):
        s = s * (f.sL if b <= f.c else f.sR)
        a, b = _branch_image(f, a, b)
    return s


@dataclass
class RenormSearch:
    valid: list  # Renormalization objects sorted by (l, r)
    failures: dict  # (l, r) -> reason
    pareto: list  # minimal (l, r) pairs
    unique_minimum: Optional[tuple]

    @property
    def pairs(self) -> list:
        return [(g.l, g.r) for g in self.valid]

    def get(self, l: int, r: int) -> Optional[Renormalization]:
        for g in self.valid:
            if (g.l, g.r) == (l, r):
                return g
        return None

    def below(self, a: tuple, b: tuple) -> bool:
        """a strictly below b in the product order."""
        return a != b and a[0] <= b[0] and a[1] <= b[1]


def search_renorms(f: LorenzMap, l_max: int, r_max: int) -> RenormSearch:
    valid, failures = [], {}
    for l in range(2, l_max + 1):
        for r in range(2, r_max + 1):
            try:
                valid.append(validate_renorm(f, l, r))
            except NotLorenz as e:
                failures[(l, r)] = e.reason
    pairs = [(g.l, g.r) for g in valid]
    pareto = [p for p in pairs if not any(q != p and q[0] <= p[0] and q[1] <= p[1] for q in pairs)]
    unique = None
    for p in pairs:
        if all(p[0] <= q[0] and p[1] <= q[1] for q in pairs):
            unique = p
    return RenormSearch(valid, failures, pareto, unique)


# ---------------------------------------------------------------------------
# invariant sets


def _in_open(p: SidedPoint, lo: SidedPoint, hi: SidedPoint) -> bool:
    return sided_cmp(lo, p) < 0 and sided_cmp(p, hi) < 0


def _enters(f: LorenzMap, start: SidedPoint, lo, hi, horizon: int):
    """True/False if some f-hat^i(start), i >= 1, lies in (lo, hi); None if undecided."""
    res = orbit(f, start, horizon)
    pts = res.points[1:] if not res.recurrent else [res.at(i) for i in range(1, res.preperiod + res.period + 1)]
    if any(_in_open(p, lo, hi) for p in pts):
        return True
    return False if res.recurrent else None


def lem_inv_verdict(f: LorenzMap, g: Renormalization, horizon: int = 200) -> str:
    """Complete invariance of F-hat_g via the orbits of u-hat and v-hat."""
    a = _enters(f, g.u_hat, g.u_hat, g.v_hat, horizon)
    b = _enters(f, g.v_hat, g.u_hat, g.v_hat, horizon)
    if a is False or b is False:
        return "not_invariant"
    if a and b:
        return "invariant"
    return "undecided"


def classify_point(f: LorenzMap, x: SidedPoint, g: Renormalization, depth: int) -> str:
    """'F_g' if the orbit of x meets (u-hat, v-hat) within depth, 'J_g' if it provably never does."""
    res_pts = [x]
    p = x
    seen = []
    for _ in range(depth + 1):
        if _in_open(p, g.u_hat, g.v_hat):
            return "F_g"
        if any(sided_cmp(p, q) == 0 for q in seen):
            return "J_g"
        seen.append(p)
        try:
            p = eval_sided(f, p)
        except RequiresSide:
            # the next iterate is c, which lies inside (u, v)
            return "F_g"
        res_pts.append(p)
    return "unknown"


def preimage_closure(f: LorenzMap, points) -> dict:
    """Check f-hat^{-1}(O) within O + {0, 1}; lists the offending preimages."""
    pts = [p if isinstance(p, SidedPoint) else SidedPoint(p) for p in points]
    outside = []
    for w in pts:
        for p in inverse_sided(f, w):
            if p.side == PLAIN and (p.value.sign() == 0 or (p.value - 1).sign() == 0):
                continue
            if not any(sided_cmp(p, q) == 0 for q in pts):
                outside.append(p)
    return {"closed": not outside, "outside": outside}


@dataclass
class InvariantSetReport:
    lem_inv: str
    samples: dict  # counts by class
    sample_classes: list
    closure: Optional[dict]

    def to_json(self) -> dict:
        out = {"lem_inv": self.lem_inv, "samples": self.samples}
        if self.closure is not None:
            out["closure"] = {
                "closed": self.closure["closed"],
                "outside": [p.to_json() for p in self.closure["outside"]],
            }
        return out


def invariant_set_analysis(
    f: LorenzMap,
    g: Renormalization,
    depth: int = 30,
    *,
    samples: int = 0,
    seed: int = 0,
    periodic_orbit=None,
    horizon: int = 200,
    sample_points=None,
) -> InvariantSetReport:
    verdict = lem_inv_verdict(f, g, horizon)
    pts = list(sample_points or [])
    if samples:
        rng = random.Random(seed)
        for _ in range(samples):
            pts.append(SidedPoint(f.ctx(Fraction(rng.randrange(1, 10**6), 10**6))))
    classes = [classify_point(f, p, g, depth) for p in pts]
    counts = {k: classes.count(k) for k in ("F_g", "J_g", "unknown")}
    closure = preimage_closure(f, periodic_orbit) if periodic_orbit is not None else None
    return InvariantSetReport(verdict, counts, classes, closure)


@dataclass
class InvariantSetRenorm:
    e_minus: object
    e_plus: object
    l: int
    r: int
    g: Optional[Renormalization]
    g_failure: Optional[str]
    invariant: bool  # no new preimages (other than 0, 1) up to depth
    failure_depth: Optional[int]
    witness: Optional[SidedPoint]


def renorm_from_invariant_set(f: LorenzMap, E, depth: int = 12) -> InvariantSetRenorm:
    """R_E f for a finite set E, with evidence on complete invariance of E."""
    vals = [p.value if isinstance(p, SidedPoint) else f.ctx(p) for p in E]
    left = [x for x in vals if x < f.c]
    right = [x for x in vals if x > f.c]
    if not left:
        raise NoPointLeftOfC("E has no point left of c")
    if not right:
        raise NoPointRightOfC("E has no point right of c")
    e_minus = max(left)
    e_plus = min(right)
    l = hitting_time_N(f, e_minus, f.c)
    r = hitting_time_N(f, f.c, e_plus)
    for e, n, name in ((e_minus, l, "e_-"), (e_plus, r, "e_+")):
        y = e
        for _ in range(n):
            y = f.value(y)
        if y != e:
            raise PeriodicityFailed(
                f"f^{n}({name}) = {float(y):.10g} differs from {name} = {float(e):.10g}", (name, n, y)
            )
    try:
        g, failure = validate_renorm(f, l, r), None
    except NotLorenz as exc:
        g, failure = None, exc.reason
    except ValueError as exc:
        g, failure = None, str(exc)
    tree = preimages(f, [SidedPoint(x) for x in vals], depth)
    fail_depth, witness = None, None
    for k, level in enumerate(tree.levels[1:], start=1):
        bad = [p for p in level if not (p.side == PLAIN and (p.value.sign() == 0 or (p.value - 1).sign() == 0))]
        if bad:
            fail_depth, witness = k, bad[0]
            break
    return InvariantSetRenorm(e_minus, e_plus, l, r, g, failure, fail_depth is None, fail_depth, witness)


# ---------------------------------------------------------------------------


@dataclass
class Matching:
    eta: Optional[int]
    eta_max: int
    next_split: Optional[int] = None  # first index after eta where the projections differ again

    @property
    def found(self) -> bool:
        return self.eta is not None


def matching(f: LorenzMap, eta_max: int) -> Matching:
    """Least eta >= 1 with pi f-hat^eta(c_-) = pi f-hat^eta(c_+)."""
    om = orbit(f, SidedPoint(f.c, MINUS), eta_max)
    op = orbit(f, SidedPoint(f.c, PLUS), eta_max)

    def get(res, i):
        try:
            return res.at(i)
        except IndexError:
            return None

    eta = None
    for i in range(1, eta_max + 1):
        a, b = get(om, i), get(op, i)
        if a is None or b is None:
            break
        if a.value == b.value:
            eta = i
            break
    nxt = None
    if eta is not None:
        for i in range(eta + 1, eta_max + 1):
            a, b = get(om, i), get(op, i)
            if a is None or b is None:
                break
            if a.value != b.value:
                nxt = i
                break
    return Matching(eta, eta_max, nxt)
