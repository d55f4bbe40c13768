"""Piecewise affine Lorenz maps and their lift to the doubled space.

Two families are supported:

* ``mod_one``: x -> beta*x + alpha (mod 1), critical point c = (1 - alpha)/beta;
* ``two_slope``: a*x + 1 - a*c on [0, c) and b*(x - c) on (c, 1].

Plain evaluation at c is refused. Orbits through c are followed with sided
points: c_- goes to 1, c_+ goes to 0, and a doubled point keeps its side.
"""
from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    AmbiguousCritical,
    CriticalOutOfRange,
    EmptyInterval,
    MonotoneDepthExceeded,
    NotExpanding,
    OrderViolation,
    RequiresSide,
)
from .numberfield import bucket_key
from .sided import MINUS, PLAIN, PLUS, SidedPoint, sided_cmp, sort_unique

__all__ = [
    "LorenzMap",
    "map_new",
    "mod_one",
    "two_slope",
    "eval_sided",
    "orbit",
    "OrbitResult",
    "Lap",
    "laps",
    "hitting_time_N",
    "iterate_interval",
    "inverse_sided",
    "preimages",
    "PreimageTree",
    "RecurrenceIndex",
]

ENDPOINT_BOUND = 512


class LorenzMap:
    """An expanding (or class-L) Lorenz map with exact parameters.

    Build instances with :func:`map_new`, :func:`mod_one` or :func:`two_slope`.
    """

    def __init__(self, family: str, ctx, params: dict, *, class_l: bool = False):
        self.family = family
        self.ctx = ctx
        self.params = {k: ctx(v) for k, v in params.items()}
        self.class_l = class_l
        one = ctx.one
        if family == "mod_one":
            beta, alpha = self.params["beta"], self.params["alpha"]
            if beta <= 1:
                raise NotExpanding(f"beta = {float(beta):.6g} is not > 1")
            c = (one - alpha) / beta
            self._check_c(c)
            self.sL, self.tL = beta, alpha
            self.sR, self.tR = beta, alpha - 1
        elif family == "two_slope":
            a, b, c = self.params["a"], self.params["b"], self.params["c"]
            self._check_c(c)
            if a.sign() <= 0 or b.sign() <= 0:
                raise OrderViolation("branch slopes must be positive")
            if class_l and a == b:
                raise OrderViolation("class L requires different slopes a != b")
            self.sL, self.tL = a, one - a * c
            self.sR, self.tR = b, -(b * c)
        else:
            raise ValueError(f"unknown family {family!r}")
        self.c = c
        self.f0 = self.tL
        self.f1 = self.sR + self.tR
        if self.f0.sign() < 0 or (self.f1 - 1).sign() > 0:
            raise OrderViolation("branch images escape [0, 1]")
        if self.f0 >= self.f1:
            raise OrderViolation(
                f"need f(0) < f(1), got f(0) = {float(self.f0):.6g}, f(1) = {float(self.f1):.6g}"
            )
        self.expanding = self.sL > 1 and self.sR > 1
        self._lock = threading.RLock()
        self._endpoint_sides = None
        self._c_levels = [[c]]

    def _check_c(self, c):
        if c.sign() <= 0 or (c - 1).sign() >= 0:
            raise CriticalOutOfRange(f"critical point {float(c):.6g} not in (0, 1)")

    def __repr__(self):
        ps = ", ".join(f"{k}={float(v):.8g}" for k, v in self.params.items())
        return f"LorenzMap({self.family}, {ps})"

    @property
    def degree(self) -> int:
        return getattr(self.ctx, "degree", 1)

    # -- plain branches ------------------------------------------------------
    def left(self, x):
        return self.sL * x + self.tL

    def right(self, x):
        return self.sR * x + self.tR

    def value(self, x):
        """f(x) for plain x != c."""
        s = (x - self.c).sign()
        if s == 0:
            raise AmbiguousCritical("f(c) is not defined; use c_- or c_+")
        return self.left(x) if s < 0 else self.right(x)

    def left_inverse(self, y):
        """x in [0, c) with f(x) = y, or None."""
        if y < self.f0 or (y - 1).sign() >= 0:
            return None
        return (y - self.tL) / self.sL

    def right_inverse(self, y):
        """x in (c, 1] with f(x) = y, or None."""
        if y.sign() <= 0 or y > self.f1:
            return None
        return (y - self.tR) / self.sR

    # -- endpoints -------------------------------------------------------------
    def _reaches_c(self, x, bound: int):
        """True if the plain orbit of x hits c, False if it recurs first, None if undecided."""
        seen = RecurrenceIndex()
        for _ in range(bound):
            if x == self.c:
                return True
            if seen.find(x) is not None:
                return False
            seen.add(x, 0)
            x = self.value(x)
        return None

    def endpoint_sides(self):
        """(f(0) doubled?, f(1) doubled?, decided?) cached per map."""
        if self._endpoint_sides is None:
            with self._lock:
                if self._endpoint_sides is None:
                    d0 = self._reaches_c(self.f0, ENDPOINT_BOUND)
                    d1 = self._reaches_c(self.f1, ENDPOINT_BOUND)
                    decided = d0 is not None and d1 is not None
                    self._endpoint_sides = (bool(d0), bool(d1), decided)
        return self._endpoint_sides

    @property
    def endpoint_sides_decided(self) -> bool:
        return self.endpoint_sides()[2]

    # -- critical preimages ------------------------------------------------------
    def critical_preimage_levels(self, depth: int) -> list:
        """Sorted level sets L_j = {z : f^j(z) = c}, j <= depth, without 0 and 1."""
        with self._lock:
            while len(self._c_levels) <= depth:
                nxt = []
                for y in self._c_levels[-1]:
                    for x in (self.left_inverse(y), self.right_inverse(y)):
                        if x is not None and x.sign() > 0 and (x - 1).sign() < 0:
                            nxt.append(x)
                nxt.sort()
                self._c_levels.append(nxt)
            return [list(level) for level in self._c_levels[: depth + 1]]

    def to_config(self) -> dict:
        cfg = {"family": self.family, "field": self.ctx.to_spec()}
        for k, v in self.params.items():
            cfg[k] = v.to_json()
        return cfg


def map_new(family: str, params: dict, context, *, class_l: bool = False) -> LorenzMap:
    return LorenzMap(family, context, params, class_l=class_l)


def mod_one(ctx, beta, alpha) -> LorenzMap:
    return LorenzMap("mod_one", ctx, {"beta": beta, "alpha": alpha})


def two_slope(ctx, a, b, c, *, class_l: bool = False) -> LorenzMap:
    return LorenzMap("two_slope", ctx, {"a": a, "b": b, "c": c}, class_l=class_l)


# ---------------------------------------------------------------------------
# sided evaluation and orbits


def eval_sided(f: LorenzMap, p: SidedPoint) -> SidedPoint:
    x, side = p.value, p.side
    if side != PLAIN:
        s = (x - f.c).sign()
        if s == 0:
            return SidedPoint(f.ctx.one if side == MINUS else f.ctx.zero)
        y = f.left(x) if s < 0 else f.right(x)
        return SidedPoint(y, side)
    if x.sign() == 0:
        d0, _, _ = f.endpoint_sides()
        return SidedPoint(f.f0, PLUS if d0 else PLAIN)
    if (x - 1).sign() == 0:
        _, d1, _ = f.endpoint_sides()
        return SidedPoint(f.f1, MINUS if d1 else PLAIN)
    y = f.value(x)
    if y == f.c:
        raise RequiresSide(f"plain point {float(x):.10g} maps onto c; use its sided copies")
    return SidedPoint(y, PLAIN)


class RecurrenceIndex:
    """Lookup of exact points by approximate value, confirmed by exact equality."""

    def __init__(self):
        self._buckets = {}

    @staticmethod
    def _split(p):
        if isinstance(p, SidedPoint):
            return p.value, p.side
        return p, None

    def _same(self, a, b) -> bool:
        va, sa = self._split(a)
        vb, sb = self._split(b)
        return sa == sb and va == vb

    def find(self, p):
        value, _ = self._split(p)
        key = bucket_key(value)
        for k in (key - 1, key, key + 1):
            for q, tag in self._buckets.get(k, ()):
                if self._same(p, q):
                    return tag
        return None

    def add(self, p, tag):
        value, _ = self._split(p)
        self._buckets.setdefault(bucket_key(value), []).append((p, tag))


@dataclass
class OrbitResult:
    """First ``len(points)`` iterates; if recurrent, f^(pre+per)(p) = f^pre(p)."""

    points: list
    preperiod: Optional[int] = None
    period: Optional[int] = None

    @property
    def recurrent(self) -> bool:
        return self.period is not None

    def at(self, i: int) -> SidedPoint:
        """f^i(p); valid for any i once the orbit is recurrent."""
        if i < len(self.points):
            return self.points[i]
        if not self.recurrent:
            raise IndexError(f"iterate {i} beyond the computed horizon")
        return self.points[self.preperiod + (i - self.preperiod) % self.period]

    def cycle(self) -> list:
        if not self.recurrent:
            return []
        return self.points[self.preperiod : self.preperiod + self.period]

    def __len__(self):
        return len(self.points)


def orbit(f: LorenzMap, p: SidedPoint, max_steps: int) -> OrbitResult:
    """Iterate f-hat from p, stopping at the first exact repeat or after max_steps steps."""
    pts = [p]
    index = RecurrenceIndex()
    index.add(p, 0)
    cur = p
    for j in range(1, max_steps + 1):
        cur = eval_sided(f, cur)
        i = index.find(cur)
        if i is not None:
            return OrbitResult(pts, i, j - i)
        index.add(cur, j)
        pts.append(cur)
    return OrbitResult(pts)


def iterate_sided(f: LorenzMap, p: SidedPoint, n: int) -> SidedPoint:
    for _ in range(n):
        p = eval_sided(f, p)
    return p


# ---------------------------------------------------------------------------
# laps and interval dynamics


@dataclass
class Lap:
    """f^n(x) = slope*x + intercept on the open interval (lo, hi)."""

    lo: object
    hi: object
    slope: object
    intercept: object
    word: str

    def image(self):
        return self.slope * self.lo + self.intercept, self.slope * self.hi + self.intercept

    def __call__(self, x):
        return self.slope * x + self.intercept


def laps(f: LorenzMap, n: int) -> list:
    """Ordered affine pieces of f^n; endpoints are 0, 1 and critical preimages of level < n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    one, zero = f.ctx.one, f.ctx.zero
    pieces = [Lap(zero, one, one, zero, "")]
    for _ in range(n):
        nxt = []
        for lap in pieces:
            ylo, yhi = lap.image()
            parts = [lap]
            if ylo < f.c < yhi:
                xm = (f.c - lap.intercept) / lap.slope
                parts = [
                    Lap(lap.lo, xm, lap.slope, lap.intercept, lap.word),
                    Lap(xm, lap.hi, lap.slope, lap.intercept, lap.word),
                ]
            for part in parts:
                ya, yb = part.image()
                if yb <= f.c:
                    s, t, bit = f.sL, f.tL, "0"
                else:
                    s, t, bit = f.sR, f.tR, "1"
                nxt.append(Lap(part.lo, part.hi, s * part.slope, s * part.intercept + t, part.word + bit))
        pieces = nxt
    return pieces


def _branch_image(f: LorenzMap, a, b):
    """Image of an open interval (a, b) not containing c; endpoints as one-sided limits."""
    if b <= f.c:
        return f.left(a), f.left(b)
    return f.right(a), f.right(b)


def iterate_interval(f: LorenzMap, a, b, n: int):
    """(f^n(a), f^n(b)) as one-sided limits, or the first i < n with c inside f^i((a, b))."""
    for i in range(n):
        if a < f.c < b:
            return None, i
        a, b = _branch_image(f, a, b)
    return (a, b), n


def hitting_time_N(f: LorenzMap, a, b, bound: Optional[int] = None) -> int:
    """Least n >= 0 with c strictly inside f^n((a, b))."""
    if a >= b:
        raise EmptyInterval(f"({float(a):.6g}, {float(b):.6g}) is empty")
    if bound is None:
        bound = 10 * f.degree * 64
    for n in range(bound + 1):
        if a < f.c < b:
            return n
        a, b = _branch_image(f, a, b)
    raise MonotoneDepthExceeded(f"c not reached within {bound} iterates")


# ---------------------------------------------------------------------------
# preimages


def inverse_sided(f: LorenzMap, w: SidedPoint) -> list:
    """All sided points p with f-hat(p) = w."""
    y, side = w.value, w.side
    out = []
    if side == PLAIN:
        if y.sign() == 0:
            out.append(SidedPoint(f.c, PLUS))
            if f.f0.sign() == 0:
                out.append(SidedPoint(y, PLAIN))
            return out
        if (y - 1).sign() == 0:
            out.append(SidedPoint(f.c, MINUS))
            if (f.f1 - 1).sign() == 0:
                out.append(SidedPoint(y, PLAIN))
            return out
    x = f.left_inverse(y)
    if x is not None and (x.sign() > 0 or side != MINUS):
        out.append(SidedPoint(x, side))
    x = f.right_inverse(y)
    if x is not None and ((x - 1).sign() < 0 or side != PLUS):
        out.append(SidedPoint(x, side))
    return out


@dataclass
class PreimageTree:
    target: list
    levels: list  # levels[k]: points whose first arrival in the target takes k steps
    mesh: list = field(default_factory=list)  # largest gap of all points up to depth k, with 0 and 1

    def points(self, depth: Optional[int] = None) -> list:
        lv = self.levels if depth is None else self.levels[: depth + 1]
        return sort_unique([p for level in lv for p in level])

    def level_of(self, p: SidedPoint) -> Optional[int]:
        for k, level in enumerate(self.levels):
            if any(sided_cmp(p, q) == 0 for q in level):
                return k
        return None

    def contains(self, p: SidedPoint, depth: Optional[int] = None) -> bool:
        k = self.level_of(p)
        return k is not None and (depth is None or k <= depth)


def preimages(f: LorenzMap, target, depth: int) -> PreimageTree:
    """All y with f-hat^k(y) in target for some k <= depth, level by level."""
    if isinstance(target, SidedPoint):
        target = [target]
    base = sort_unique(target)
    seen = list(base)
    levels = [list(base)]
    zero, one = f.ctx.zero, f.ctx.one
    values = sorted(_unique_values([zero, one] + [p.value for p in base]))
    mesh = [_max_gap(values)]
    for _ in range(depth):
        new = []
        for w in levels[-1]:
            for p in inverse_sided(f, w):
                i = bisect.bisect_left(seen, p)
                if i < len(seen) and sided_cmp(seen[i], p) == 0:
                    continue
                seen.insert(i, p)
                new.append(p)
        new = sort_unique(new)
        levels.append(new)
        for p in new:
            j = bisect.bisect_left(values, p.value)
            if j >= len(values) or values[j] != p.value:
                values.insert(j, p.value)
        mesh.append(_max_gap(values))
    return PreimageTree(base, levels, mesh)


def _unique_values(vals) -> list:
    out = []
    for v in sorted(vals):
        if not out or out[-1] != v:
            out.append(v)
    return out


def _max_gap(values):
    return max(b - a for a, b in zip(values, values[1:]))
