"""Floating point hot loops: rotation counts and the grid scan for f^n(x) - x.

Each kernel has a numba version and a plain numpy version with the same
signature. Setting ``LORENZ_LAB_DISABLE_NUMBA=1`` (or running without numba)
selects the numpy versions.
"""
from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised through USING_NUMBA
    if os.environ.get("LORENZ_LAB_DISABLE_NUMBA", "0") not in ("", "0"):
        raise ImportError("disabled by environment")
    from numba import njit

    USING_NUMBA = True
except ImportError:
    USING_NUMBA = False

__all__ = [
    "USING_NUMBA",
    "rotation_counts",
    "rotation_counts_numpy",
    "iterate_with_words",
    "iterate_with_words_numpy",
    "grid_periodic_points",
]


# -- rotation counts -----------------------------------------------------------


def rotation_counts_numpy(x0, sL, tL, sR, tR, c, checkpoints):
    """m_n(x) = #{0 <= i < n : f^i(x) >= c} for every n in checkpoints (sorted)."""
    x = np.array(x0, dtype=np.float64, copy=True)
    checkpoints = np.asarray(checkpoints, dtype=np.int64)
    out = np.zeros((x.size, checkpoints.size), dtype=np.int64)
    count = np.zeros(x.size, dtype=np.int64)
    j = 0
    n_max = int(checkpoints[-1]) if checkpoints.size else 0
    for i in range(n_max):
        while j < checkpoints.size and checkpoints[j] == i:
            out[:, j] = count
            j += 1
        right = x >= c
        count += right
        x = np.where(right, sR * x + tR, sL * x + tL)
        np.clip(x, 0.0, 1.0, out=x)
    while j < checkpoints.size:
        out[:, j] = count
        j += 1
    return out


def _rotation_counts_loop(x0, sL, tL, sR, tR, c, checkpoints):
    n_s = x0.shape[0]
    n_c = checkpoints.shape[0]
    out = np.zeros((n_s, n_c), dtype=np.int64)
    n_max = checkpoints[n_c - 1] if n_c > 0 else 0
    for s in range(n_s):
        x = x0[s]
        count = 0
        j = 0
        for i in range(n_max):
            while j < n_c and checkpoints[j] == i:
                out[s, j] = count
                j += 1
            if x >= c:
                count += 1
                x = sR * x + tR
            else:
                x = sL * x + tL
            if x < 0.0:
                x = 0.0
            elif x > 1.0:
                x = 1.0
        while j < n_c:
            out[s, j] = count
            j += 1
    return out


# -- iterates with itineraries -------------------------------------------------


def iterate_with_words_numpy(x0, sL, tL, sR, tR, c, n):
    """(f^n(x), itinerary of length n encoded as an integer, bit i = symbol i)."""
    x = np.array(x0, dtype=np.float64, copy=True)
    word = np.zeros(x.size, dtype=np.int64)
    for i in range(n):
        right = x >= c
        word |= right.astype(np.int64) << i
        x = np.where(right, sR * x + tR, sL * x + tL)
    return x, word


def _iterate_with_words_loop(x0, sL, tL, sR, tR, c, n):
    m = x0.shape[0]
    xs = np.empty(m, dtype=np.float64)
    words = np.zeros(m, dtype=np.int64)
    for k in range(m):
        x = x0[k]
        w = 0
        for i in range(n):
            if x >= c:
                w |= 1 << i
                x = sR * x + tR
            else:
                x = sL * x + tL
        xs[k] = x
        words[k] = w
    return xs, words


if USING_NUMBA:
    rotation_counts = njit(cache=False)(_rotation_counts_loop)
    iterate_with_words = njit(cache=False)(_iterate_with_words_loop)
else:
    rotation_counts = rotation_counts_numpy
    iterate_with_words = iterate_with_words_numpy


def grid_periodic_points(sL, tL, sR, tR, c, n, grid=100_000, tol=1e-10):
    """Brute-force roots of f^n(x) - x on a uniform grid, refined by bisection.

    Itineraries are monotone in x, so a cell whose two ends share an
    itinerary lies inside one lap and a sign change there is a root. Cells
    whose ends differ are split until every piece is of that kind (pieces
    shorter than tol are dropped), which catches laps narrower than the grid.
    Returns sorted float roots.
    """
    params = (sL, tL, sR, tR, c, n)
    xs = np.linspace(0.0, 1.0, grid + 1)
    ys, words = iterate_with_words(xs, *params)
    g = ys - xs
    roots = [xs[g == 0.0]]
    a, b, ga, gb = xs[:-1], xs[1:], g[:-1], g[1:]
    same = words[:-1] == words[1:]
    keep = [(a[same], b[same], ga[same], gb[same])]
    # split cells with differing end itineraries, all cells of a level at once
    a, b, wa, wb, ga, gb = a[~same], b[~same], words[:-1][~same], words[1:][~same], ga[~same], gb[~same]
    while a.size:
        live = b - a > tol
        a, b, wa, wb, ga, gb = a[live], b[live], wa[live], wb[live], ga[live], gb[live]
        m = 0.5 * (a + b)
        ym, wm = iterate_with_words(m, *params)
        gm = ym - m
        roots.append(m[gm == 0.0])
        a = np.concatenate([a, m])
        b = np.concatenate([m, b])
        wa, wb = np.concatenate([wa, wm]), np.concatenate([wm, wb])
        ga, gb = np.concatenate([ga, gm]), np.concatenate([gm, gb])
        done = wa == wb
        keep.append((a[done], b[done], ga[done], gb[done]))
        a, b, wa, wb, ga, gb = a[~done], b[~done], wa[~done], wb[~done], ga[~done], gb[~done]
    a, b, ga, gb = (np.concatenate(v) for v in zip(*keep))
    change = ga * gb < 0
    a, b, ga = a[change], b[change], ga[change]
    # bisection on all bracketing pieces at once
    while a.size and np.max(b - a) > tol:
        m = 0.5 * (a + b)
        ym, _ = iterate_with_words(m, *params)
        gm = ym - m
        left = (gm > 0) == (ga > 0)
        a = np.where(left, m, a)
        ga = np.where(left, gm, ga)
        b = np.where(left, b, m)
    roots.append(0.5 * (a + b))
    return np.unique(np.concatenate(roots))
