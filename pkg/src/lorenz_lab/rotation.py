"""Rotation numbers: the frequency of visits to the right of c.

For x in the doubled space, m_n(x) counts the indices 0 <= i < n with
f-hat^i(x) >= c_+. Samples whose exact orbit recurs get an exact rational
rotation number; every sample also gets floating estimates m_n/n at several
n, which are reported as raw data (no convergence is claimed for them).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _kernels
from .kneading import kneading_bit
from .lorenzmap import LorenzMap, orbit
from .sided import SidedPoint

__all__ = ["RotationSample", "RotationReport", "rotation_analysis", "exact_rotation_number", "float_params"]


def float_params(f: LorenzMap) -> tuple:
    return float(f.sL), float(f.tL), float(f.sR), float(f.tR), float(f.c)


def exact_rotation_number(f: LorenzMap, p: SidedPoint, horizon: int = 200) -> Optional[Fraction]:
    """(ones in the period) / (period length) when the orbit of p recurs within horizon."""
    res = orbit(f, p, horizon)
    if not res.recurrent:
        return None
    ones = sum(kneading_bit(f, q) == "1" for q in res.cycle())
    return Fraction(ones, res.period)


@dataclass
class RotationSample:
    x: float
    counts: dict  # n -> m_n
    exact: Optional[Fraction]

    def estimate(self, n: int) -> float:
        return self.counts[n] / n


@dataclass
class RotationReport:
    n_iter: int
    checkpoints: list
    samples: list
    interval: tuple  # (min, max) of the estimates at n_iter
    verdict: str  # "degenerate", "degenerate_numerical", "undecided"
    value: Optional[Fraction] = None
    nonconverged: list = field(default_factory=list)  # sample indices whose estimates still drift

    def estimates(self, n: Optional[int] = None) -> np.ndarray:
        n = self.n_iter if n is None else n
        return np.array([s.estimate(n) for s in self.samples])

    def rows(self) -> list:
        """CSV rows: sample, n_iter, m_n, estimate, exact."""
        out = []
        for i, s in enumerate(self.samples):
            for n in self.checkpoints:
                out.append(
                    {
                        "sample": i,
                        "n_iter": n,
                        "m_n": s.counts[n],
                        "estimate": round(s.counts[n] / n, 12),
                        "exact": "" if s.exact is None else str(s.exact),
                    }
                )
        return out


def _default_checkpoints(n_iter: int) -> list:
    pts = sorted({max(1, n_iter // 10), max(1, n_iter // 4), max(1, n_iter // 2), n_iter})
    return pts


def rotation_analysis(
    f: LorenzMap,
    samples,
    n_iter: int,
    *,
    cycle=None,
    checkpoints=None,
    exact_horizon: int = 200,
) -> RotationReport:
    """Estimate rotation numbers of the given samples (SidedPoints or numbers in [0, 1]).

    ``cycle`` may be an NkCycle or a PeriodicOrbit carrying one; a primary
    n(k)-cycle forces a degenerate rotation interval {k/n}.
    """
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    samples = list(samples)
    if not samples:
        raise ValueError("samples must be nonempty")
    checkpoints = sorted(set(checkpoints or _default_checkpoints(n_iter)) | {n_iter})
    exact_pts = []
    xs = []
    for s in samples:
        if isinstance(s, SidedPoint):
            exact_pts.append(s)
            xs.append(float(s.value))
        else:
            exact_pts.append(None)
            xs.append(float(s))
    counts = _kernels.rotation_counts(np.asarray(xs, dtype=np.float64), *float_params(f), np.asarray(checkpoints, dtype=np.int64))
    out = []
    for i, (x, p) in enumerate(zip(xs, exact_pts)):
        exact = None
        row = {n: int(counts[i, j]) for j, n in enumerate(checkpoints)}
        if p is not None:
            res = orbit(f, p, exact_horizon)
            if res.recurrent:
                bits = [kneading_bit(f, q) == "1" for q in res.points]
                exact = Fraction(sum(bits[res.preperiod :]), res.period)
                # exact counts from the periodic structure
                for n in checkpoints:
                    full = bits + [bits[res.preperiod + (j - res.preperiod) % res.period] for j in range(len(bits), n)]
                    row[n] = sum(full[:n])
        out.append(RotationSample(x, row, exact))
    est = np.array([s.estimate(n_iter) for s in out])
    interval = (float(est.min()), float(est.max()))
    tol = 2.0 / n_iter
    nonconv = [
        i for i, s in enumerate(out) if len(checkpoints) > 1 and abs(s.estimate(n_iter) - s.estimate(checkpoints[-2])) > 2 * tol
    ]
    nk = getattr(cycle, "nk", cycle)
    if nk is not None and getattr(nk, "primary", False):
        verdict, value = "degenerate", Fraction(nk.k, nk.n)
    elif interval[1] - interval[0] <= tol:
        verdict, value = "degenerate_numerical", None
    else:
        verdict, value = "undecided", None
    return RotationReport(n_iter, checkpoints, out, interval, verdict, value, nonconv)
