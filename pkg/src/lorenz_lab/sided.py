"""Points of the doubled space: values in [0, 1] with an optional side.

Every preimage of the critical point is split into a left copy ``x_-`` and a
right copy ``x_+``; all other points stay plain. The endpoints 0 and 1 are
never doubled. The metric combines the distance of projections with the
depth of the shallowest critical preimage separating the two points.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

MINUS, PLAIN, PLUS = -1, 0, 1
_SIDE_TEXT = {MINUS: "-", PLAIN: "0", PLUS: "+"}
_TEXT_SIDE = {v: k for k, v in _SIDE_TEXT.items()}

__all__ = [
    "MINUS",
    "PLAIN",
    "PLUS",
    "SidedPoint",
    "sided_cmp",
    "sort_unique",
    "MetricResult",
    "metric_d",
]


class SidedPoint:
    """A value in [0, 1] together with a side in {-1, 0, +1}."""

    __slots__ = ("value", "side")

    def __init__(self, value, side: int = PLAIN):
        if side not in (MINUS, PLAIN, PLUS):
            raise ValueError(f"side must be -1, 0 or +1, got {side!r}")
        if side != PLAIN and (value.sign() <= 0 or (value - 1).sign() >= 0):
            # 0 and 1 are never doubled
            side = PLAIN
        self.value = value
        self.side = side

    @classmethod
    def plain(cls, value):
        return cls(value, PLAIN)

    @classmethod
    def minus(cls, value):
        return cls(value, MINUS)

    @classmethod
    def plus(cls, value):
        return cls(value, PLUS)

    @property
    def pi(self):
        """Projection back to [0, 1]."""
        return self.value

    def with_side(self, side: int) -> "SidedPoint":
        return SidedPoint(self.value, side)

    def __repr__(self):
        suffix = {MINUS: "_-", PLAIN: "", PLUS: "_+"}[self.side]
        return f"{float(self.value):.10g}{suffix}"

    def to_json(self) -> dict:
        return {"value": self.value.to_json(), "side": _SIDE_TEXT[self.side]}

    @classmethod
    def from_json(cls, data: dict, ctx) -> "SidedPoint":
        return cls(ctx.element(data["value"]), _TEXT_SIDE[str(data.get("side", "0"))])

    # order ------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, SidedPoint):
            return NotImplemented
        return self.side == other.side and self.value == other.value

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        return sided_cmp(self, other) < 0

    def __le__(self, other):
        return sided_cmp(self, other) <= 0

    def __gt__(self, other):
        return sided_cmp(self, other) > 0

    def __ge__(self, other):
        return sided_cmp(self, other) >= 0

    __hash__ = None


def sided_cmp(p: SidedPoint, q: SidedPoint) -> int:
    """-1, 0 or +1; at a common value the order is minus < plain < plus."""
    s = (p.value - q.value).sign()
    if s:
        return s
    return (p.side > q.side) - (p.side < q.side)


def sort_unique(points) -> list:
    """Sort sided points exactly and drop duplicates."""
    out = []
    for p in sorted(points):
        if not out or sided_cmp(out[-1], p) != 0:
            out.append(p)
    return out


@dataclass
class MetricResult:
    """Value of d(p, q) or, when undecided at the searched depth, a bracket."""

    decided: bool
    value: Optional[object]  # exact field element when decided
    lower: object
    upper: object
    n: Optional[int]  # N(p, q)

    def __float__(self):
        return float(self.value if self.decided else self.upper)

    def to_json(self) -> dict:
        if self.decided:
            return {"decided": True, "value": float(self.value), "N": self.n}
        return {"decided": False, "lower": float(self.lower), "upper": float(self.upper)}


def metric_d(f, p: SidedPoint, q: SidedPoint, depth: int) -> MetricResult:
    """d(p, q) = |pi(p) - pi(q)| + 1 / (N(p, q) + 1).

    N(p, q) is the least level of a critical preimage z (not 0 or 1) with
    ``p < z_+`` and ``z_- < q`` for p < q. Levels beyond ``depth`` are not
    explored; in that case the result is a certified bracket.
    """
    order = sided_cmp(p, q)
    if order == 0:
        zero = p.value - p.value
        return MetricResult(True, zero, zero, zero, None)
    if order > 0:
        p, q = q, p
    gap = q.value - p.value
    levels = f.critical_preimage_levels(depth)
    for j, level in enumerate(levels):
        for z in level:
            if sided_cmp(p, SidedPoint(z, PLUS)) < 0 and sided_cmp(SidedPoint(z, MINUS), q) < 0:
                value = gap + Fraction(1, j + 1)
                return MetricResult(True, value, value, value, j)
    return MetricResult(False, None, gap, gap + Fraction(1, depth + 2), None)
