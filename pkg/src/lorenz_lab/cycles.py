"""Periodic orbits of the doubled map, n(k)-cycles and the fixed-point lemma.

Plain periodic points of period dividing n are the fixed points of the affine
laps of f^n. A lap whose fixed point sits on its boundary gives a sided
candidate (the copy facing the lap), which is then confirmed by sided
iteration; these are exactly the periodic orbits through c_- or c_+.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import OutOfBound, SlopeOneLap
from .lorenzmap import LorenzMap, eval_sided, inverse_sided, iterate_sided, laps, orbit
from .sided import MINUS, PLAIN, PLUS, SidedPoint, sided_cmp, sort_unique

__all__ = [
    "PeriodicOrbit",
    "PeriodicOrbits",
    "NkCycle",
    "periodic_orbits",
    "periodic_points",
    "detect_nk_cycle",
    "fixed_point_lemma_check",
    "FixedPointLemma",
]


@dataclass(frozen=True)
class NkCycle:
    n: int
    k: int
    primary: bool
    strict: bool


@dataclass
class PeriodicOrbit:
    """A periodic orbit of f-hat.

    ``cycle`` lists the points in dynamical order starting from the leftmost,
    ``points`` in increasing order. ``projected_periods`` gives, for orbits
    through c, the f-hat period of each of c_- and c_+ (None if that copy is
    not periodic), since the period of c itself depends on which copy is meant.
    """

    cycle: list
    points: list
    period: int
    right_count: int
    contains_sided: bool
    projected_periods: dict = field(default_factory=dict)
    nk: Optional[NkCycle] = None

    @property
    def is_nk_cycle(self) -> bool:
        return self.nk is not None

    @property
    def is_primary(self) -> bool:
        return self.nk is not None and self.nk.primary

    @property
    def is_strict(self) -> bool:
        return self.nk is not None and self.nk.strict

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "right_count": self.right_count,
            "contains_sided": self.contains_sided,
            "points": [p.to_json() for p in self.points],
            "approx": [round(float(p.value), 12) for p in self.points],
            "projected_periods": self.projected_periods,
            "nk_cycle": None
            if self.nk is None
            else {"n": self.nk.n, "k": self.nk.k, "primary": self.nk.primary, "strict": self.nk.strict},
        }


@dataclass
class PeriodicOrbits:
    orbits: list
    kappa: Optional[int]
    n_max: int

    def of_period(self, n: int) -> list:
        return [o for o in self.orbits if o.period == n]

    def plain(self) -> list:
        return [o for o in self.orbits if not o.contains_sided]


def _lap_candidates(f: LorenzMap, n: int) -> list:
    """Points p (plain or sided) with f-hat^n(p) = p found from the laps of f^n."""
    out = []
    zero, one = f.ctx.zero, f.ctx.one
    for lap in laps(f, n):
        s, t = lap.slope, lap.intercept
        if s == 1:
            if t.sign() == 0:
                raise SlopeOneLap(
                    f"f^{n} is the identity on ({float(lap.lo):.8g}, {float(lap.hi):.8g})"
                )
            continue
        x = t / (1 - s)
        if lap.lo < x < lap.hi:
            out.append(SidedPoint(x))
            continue
        if x == lap.lo:
            cand = SidedPoint(x) if x.sign() == 0 else SidedPoint(x, PLUS)
        elif x == lap.hi:
            cand = SidedPoint(x) if x == one else SidedPoint(x, MINUS)
        else:
            continue
        if sided_cmp(iterate_sided(f, cand, n), cand) == 0:
            out.append(cand)
    return sort_unique(out)


def periodic_points(f: LorenzMap, n: int) -> list:
    """All p with f-hat^n(p) = p, sorted."""
    return _lap_candidates(f, n)


def _make_orbit(f: LorenzMap, start: SidedPoint, period: int) -> PeriodicOrbit:
    cyc = [start]
    p = start
    for _ in range(period - 1):
        p = eval_sided(f, p)
        cyc.append(p)
    pts = sort_unique(cyc)
    first = pts[0]
    i = next(j for j, q in enumerate(cyc) if sided_cmp(q, first) == 0)
    cyc = cyc[i:] + cyc[:i]
    cplus = SidedPoint(f.c, PLUS)
    right = sum(1 for q in pts if sided_cmp(q, cplus) >= 0)
    sided = any(q.side != PLAIN for q in pts)
    proj = {}
    if any(q.value == f.c for q in pts):
        for side, name in ((MINUS, "c_-"), (PLUS, "c_+")):
            res = orbit(f, SidedPoint(f.c, side), 4 * period + 8)
            proj[name] = res.period if res.recurrent and res.preperiod == 0 else None
    return PeriodicOrbit(cyc, pts, period, right, sided, proj)


def _minimal_period(f: LorenzMap, p: SidedPoint, n: int) -> int:
    q = p
    for m in range(1, n + 1):
        q = eval_sided(f, q)
        if sided_cmp(q, p) == 0:
            return m
    raise AssertionError("point is not periodic with the claimed period")


def periodic_orbits(f: LorenzMap, n_max: int, *, detect: bool = True) -> PeriodicOrbits:
    """Every periodic orbit of period <= n_max, including those through c_- or c_+."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    orbits = []
    found = []  # sorted points already assigned to an orbit
    for n in range(1, n_max + 1):
        for p in _lap_candidates(f, n):
            if any(sided_cmp(p, q) == 0 for q in found):
                continue
            if _minimal_period(f, p, n) != n:
                continue
            orb = _make_orbit(f, p, n)
            found = sort_unique(found + orb.points)
            orbits.append(orb)
    # critical orbits, recorded separately in case the lap scan missed one
    for side in (MINUS, PLUS):
        res = orbit(f, SidedPoint(f.c, side), n_max)
        if res.recurrent and res.preperiod == 0 and res.period <= n_max:
            start = res.points[0]
            if not any(sided_cmp(start, q) == 0 for q in found):
                orb = _make_orbit(f, start, res.period)
                found = sort_unique(found + orb.points)
                orbits.append(orb)
    orbits.sort(key=lambda o: (o.period, float(o.points[0].value)))
    if detect:
        for o in orbits:
            o.nk = detect_nk_cycle(f, o)
    kappa = min((o.period for o in orbits), default=None)
    return PeriodicOrbits(orbits, kappa, n_max)


def detect_nk_cycle(f: LorenzMap, orb: PeriodicOrbit) -> Optional[NkCycle]:
    """(n, k, primary, strict) if the orbit is an n(k)-cycle, else None.

    Needs plain points, k points right of c with gcd(n, k) = 1 and the
    rotation pattern f(z_j) = z_{j+k mod n}.
    """
    if orb.contains_sided:
        return None
    z = orb.points
    n = len(z)
    k = orb.right_count
    if n < 2 or not 0 < k < n or math.gcd(n, k) != 1:
        return None
    for j in range(n):
        if eval_sided(f, z[j]).value != z[(j + k) % n].value:
            return None
    primary = z[k - 1].value <= f.f0 and f.f1 <= z[k].value
    strict = z[k - 1].value != f.f0 and z[k].value != f.f1
    return NkCycle(n, k, bool(primary), bool(primary and strict))


@dataclass
class FixedPointLemma:
    m: int
    witness: SidedPoint  # point of the critical preimage tree inside [f(0), f(1)]
    fixed_point: SidedPoint  # fixed point of f-hat^(m+2)


def fixed_point_lemma_check(f: LorenzMap, bound: int) -> FixedPointLemma:
    """Least m with a critical preimage of level m in [f-hat(0), f-hat(1)], and a fixed point of f-hat^(m+2)."""
    lo = eval_sided(f, SidedPoint(f.ctx.zero))
    hi = eval_sided(f, SidedPoint(f.ctx.one))
    level = [SidedPoint(f.c, MINUS), SidedPoint(f.c, PLUS)]
    seen = list(level)
    for m in range(bound + 1):
        hits = [p for p in level if sided_cmp(lo, p) <= 0 and sided_cmp(p, hi) <= 0]
        if hits:
            fixed = periodic_points(f, m + 2)
            if not fixed:
                raise AssertionError(f"no fixed point of f^{m + 2} although m = {m}")
            return FixedPointLemma(m, hits[0], fixed[0])
        nxt = []
        for w in level:
            for p in inverse_sided(f, w):
                if not any(sided_cmp(p, q) == 0 for q in seen):
                    seen.append(p)
                    nxt.append(p)
        level = sort_unique(nxt)
    raise OutOfBound(f"no critical preimage of level <= {bound} in [f(0), f(1)]")
