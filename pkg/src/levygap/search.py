"""Global sup/inf of a positive function of x > 0: log grid scan + golden section."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class Extremum:
    value: float
    argx: float
    at_boundary: bool  # objective still improving at an end of the grid
    grid: np.ndarray
    curve: np.ndarray


def golden_section_max(f, lo, hi, tol=1e-10, max_iter=200):
    """Maximise a unimodal ``f`` on [lo, hi]; returns (argmax, max)."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if abs(hi - lo) <= tol * (1.0 + abs(lo) + abs(hi)):
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def evaluate_grid(f, xs, threads=1):
    if threads <= 1:
        return np.array([f(float(x)) for x in xs])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.array(list(pool.map(lambda x: f(float(x)), xs)))


def log_grid_extremum(f, x_min=1e-3, x_max=1e3, n=200, mode="max", tol=1e-10,
                      rise_rtol=1e-6, threads=1):
    """sup (mode='max') or inf (mode='min') of ``f`` over x in [x_min, x_max].

    The best point of a log-spaced grid is refined by golden section in
    log x between its grid neighbours.  ``at_boundary`` is set when the
    best grid point is an end point and the objective is still improving
    there by more than ``rise_rtol`` (relative), i.e. the extremum over all
    x > 0 may lie outside the scanned range.
    """
    sign = 1.0 if mode == "max" else -1.0
    xs = np.geomspace(x_min, x_max, n)
    vals = evaluate_grid(f, xs, threads)
    score = sign * vals
    if not np.any(np.isfinite(score)):
        return Extremum(float("nan"), float("nan"), True, xs, vals)
    i = int(np.nanargmax(score))

    def improving(j, k):
        return score[j] > score[k] + rise_rtol * abs(score[k])

    at_boundary = (i == n - 1 and improving(n - 1, n - 2)) or (i == 0 and improving(0, 1))
    lo = math.log(xs[max(i - 1, 0)])
    hi = math.log(xs[min(i + 1, n - 1)])
    u, best = golden_section_max(lambda u: sign * f(math.exp(u)), lo, hi, tol=tol)
    if best < score[i]:
        u, best = math.log(xs[i]), score[i]
    return Extremum(float(sign * best), float(math.exp(u)), bool(at_boundary), xs, vals)
