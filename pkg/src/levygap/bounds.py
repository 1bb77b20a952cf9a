"""Ergodicity functionals and convergence-rate lower bounds.

With H the harmonic function of the base process killed at 0 and
mu(dx) = dx / a(x):

    delta       = sup_x H(x) mu((-|x|, |x|)^c)      lambda_1 >= 1 / (8 delta)
    delta_+     = sup_{x>0} H(x) mu((x, inf))
    delta_-     = sup_{x>0} H(x) mu((-inf, -x))     1/delta_+ + 1/delta_- >= lambda_0
    I           = int H(|x|) mu(dx)                 kappa >= 1 / (2 I),  M_0 <= 2 I

The Green kernel of the base process killed at 0 is
G_X(x, y) = H(x) + H(y) - H(y - x), and the time-changed kernel acts by
G_Y f(x) = int G_X(x, y) f(y) mu(dy).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InfiniteMassError, NonConvergenceError
from .harmonic import omega
from .search import Extremum, log_grid_extremum
from .speed import mu_integral, mu_tail, mu_tail_left, mu_tail_right, mu_total
from .symbol import psi_star

__all__ = [
    "BoundsConfig",
    "DeltaResult",
    "WlscBounds",
    "compute_delta",
    "lambda1_lower",
    "compute_I_and_kappa",
    "lambda0_bracket",
    "green_X0",
    "green_Y0_apply",
    "variational_lower_certificate",
    "wlsc_bounds",
    "stable_specialized_bounds",
    "cauchy_brownian_bounds",
    "stable_mixture_example_bounds",
]


@dataclass(frozen=True)
class BoundsConfig:
    x_min: float = 1e-3
    x_max: float = 1e3
    n_grid: int = 200
    golden_tol: float = 1e-10
    threads: int = 1

    def scan(self, f, mode="max"):
        return log_grid_extremum(f, self.x_min, self.x_max, self.n_grid, mode=mode,
                                 tol=self.golden_tol, threads=self.threads)


@dataclass
class DeltaResult:
    delta: float
    delta_plus: float
    delta_minus: float
    argsup: float
    argsup_plus: float
    argsup_minus: float
    possibly_infinite: bool
    error: float
    curve_x: np.ndarray = field(repr=False)
    curve_H: np.ndarray = field(repr=False)
    curve_tail: np.ndarray = field(repr=False)


def compute_delta(ev, sp, cfg=None):
    """delta and its one-sided versions by log-grid scan plus golden refinement.

    Any functional whose objective is still rising at the end of the scan
    is reported as ``inf`` and ``possibly_infinite`` is set.
    """
    cfg = cfg or BoundsConfig()
    obj = lambda x: ev.H(x) * mu_tail(sp, x)
    full = cfg.scan(obj)
    if sp.is_symmetric:
        plus = minus = _scaled(full, 0.5)
    else:
        plus = cfg.scan(lambda x: ev.H(x) * mu_tail_right(sp, x))
        minus = cfg.scan(lambda x: ev.H(-x) * mu_tail_left(sp, x))
    fin = lambda e: math.inf if e.at_boundary else e.value
    H_err = ev.eval_H(full.argx)[1]
    xs = full.grid
    H_vals = np.array([ev.H(x) for x in xs])
    tails = np.array([mu_tail(sp, x) for x in xs])
    return DeltaResult(
        delta=fin(full), delta_plus=fin(plus), delta_minus=fin(minus),
        argsup=full.argx, argsup_plus=plus.argx, argsup_minus=minus.argx,
        possibly_infinite=full.at_boundary or plus.at_boundary or minus.at_boundary,
        error=H_err * mu_tail(sp, full.argx) + cfg.golden_tol * abs(full.value),
        curve_x=xs, curve_H=H_vals, curve_tail=tails,
    )


def _scaled(e, c):
    return Extremum(e.value * c, e.argx, e.at_boundary, e.grid, e.curve * c)


def lambda1_lower(delta):
    """1 / (8 delta), or None when delta is not a finite positive number."""
    if delta is None or not (0 < delta < math.inf):
        return None
    return 1.0 / (8.0 * delta)


def compute_I_and_kappa(ev, sp):
    """Return (I, kappa_lower, M0_upper, error); (inf, None, inf, nan) on divergence."""
    try:
        I, err = mu_integral(sp, lambda y: ev.H(abs(y)))
    except (NonConvergenceError, InfiniteMassError):
        return math.inf, None, math.inf, math.nan
    if not (0 < I < math.inf):
        return math.inf, None, math.inf, math.nan
    return I, 1.0 / (2.0 * I), 2.0 * I, err


def lambda0_bracket(delta, delta_plus, delta_minus):
    """(1 / (8 delta), 1/delta_+ + 1/delta_-); a side is None when its inputs are not finite."""
    lower = lambda1_lower(delta)
    upper = None
    if all(d is not None and 0 < d < math.inf for d in (delta_plus, delta_minus)):
        upper = 1.0 / delta_plus + 1.0 / delta_minus
    return lower, upper


def green_X0(ev, x, y):
    """G_X(x, y) = H(x) + H(y) - H(y - x)."""
    return ev.H(x) + ev.H(y) - ev.H(y - x)


def green_Y0_apply(ev, sp, f, x):
    """(G_Y f)(x) = int G_X(x, y) f(y) mu(dy); returns (value, error)."""
    ax = abs(x)
    bps = (-ax, ax) if ax > 0 else ()
    return mu_integral(sp, lambda y: green_X0(ev, x, y) * f(y), breakpoints=bps)


def variational_lower_certificate(ev, sp, f, grid):
    """min over ``grid`` of f(x) / (G_Y f)(x), a lower bound for lambda_0.

    ``f`` must vanish at 0 and be positive on the grid.
    """
    ratios = []
    for x in np.asarray(grid, dtype=float):
        fx = f(x)
        if not fx > 0:
            raise ValueError(f"test function must be positive on the grid, f({x:g}) = {fx}")
        g, _ = green_Y0_apply(ev, sp, f, x)
        ratios.append(fx / g)
    return float(min(ratios))


# ---------------------------------------------------------------------------
# scaling-condition (WLSC) bounds


def _safe_ratio(num, tail):
    # mu-tails underflow to 0 far out; the ratio is then +inf, never an error
    return num / tail if tail > 0 else math.inf


@dataclass
class WlscBounds:
    lambda1_lower: float | None
    kappa_lower: float | None
    inf_ratio: float
    inf_argx: float
    kappa_integral: float
    comparability: float = 1.0


    def to_dict(self):
        return {"lambda1_lower_wlsc": self.lambda1_lower, "kappa_lower_wlsc": self.kappa_lower,
                "inf_ratio": self.inf_ratio, "inf_argx": self.inf_argx,
                "kappa_integral": self.kappa_integral, "comparability": self.comparability}


def wlsc_bounds(psi, w, sp, cfg=None):
    """Bounds that only use the scaling envelope of H.

    With H(x) <= 10 / (pi beta^2 (d - 1) x psi*(1/x)):

        lambda_1 >= pi (d - 1) beta^2 / 80 * inf_x x psi*(1/x) / mu((-x, x)^c)
        kappa    >= pi (d - 1) beta^2 / (20 int (|x| a(x) psi*(1/|x|))^{-1} dx)
    """
    if w is None or w.delta_s <= 1:
        return None
    cfg = cfg or BoundsConfig()
    c = comparability_constant(psi)
    if c < 1.0:
        warnings.warn(f"psi >= c psi* only holds with c = {c:.4g} < 1; the scaling bounds "
                      "assume c = 1", stacklevel=2)
    const = math.pi * (w.delta_s - 1.0) * w.beta ** 2
    ratio = lambda x: _safe_ratio(x * psi_star(psi, 1.0 / x), mu_tail(sp, x))
    ext = cfg.scan(ratio, mode="min")
    lam = None if ext.at_boundary else const / 80.0 * ext.value
    try:
        J, _ = mu_integral(sp, lambda y: 0.0 if y == 0 else
                           1.0 / (abs(y) * psi_star(psi, 1.0 / abs(y))))
        kap = const / (20.0 * J)
    except (NonConvergenceError, InfiniteMassError):
        J, kap = math.inf, None
    return WlscBounds(lam, kap, ext.value, ext.argx, J, c)


def comparability_constant(psi):
    """inf psi / psi* over the tabulation grid (1 for the monotone built-in families)."""
    if psi.xi_grid is None:
        return 1.0
    vals = psi.psi_grid[1:]
    run = np.maximum.accumulate(vals)
    ok = run > 0
    return float(np.min(vals[ok] / run[ok])) if ok.any() else 1.0


# ---------------------------------------------------------------------------
# closed-form specialisations for particular symbols


def stable_specialized_bounds(alpha, sp, cfg=None):
    """psi = |xi|^alpha: H = omega |x|^{alpha-1} / 2.

    delta_1 = sup |x|^{alpha-1} mu((-|x|,|x|)^c),  lambda_1 >= 1 / (4 omega delta_1);
    I_1 = int |x|^{alpha-1} mu(dx),                kappa >= 1 / (omega I_1).
    """
    cfg = cfg or BoundsConfig()
    w = omega(alpha)
    ext = cfg.scan(lambda x: x ** (alpha - 1) * mu_tail(sp, x))
    d1 = math.inf if ext.at_boundary else ext.value
    try:
        I1, _ = mu_integral(sp, lambda y: abs(y) ** (alpha - 1))
    except (NonConvergenceError, InfiniteMassError):
        I1 = math.inf
    return {
        "omega": w, "delta_1": d1, "I_1": I1,
        "lambda1_lower": 1.0 / (4 * w * d1) if d1 < math.inf else None,
        "kappa_lower": 1.0 / (w * I1) if I1 < math.inf else None,
    }


def cauchy_brownian_bounds(sp, cfg=None):
    """psi = xi^2 + |xi| with the envelope H(x) <= (10/pi) log(1 + |x|).

    delta_2 = sup log(1+|x|) mu((-|x|,|x|)^c),  lambda_1 >= pi / (80 delta_2);
    I_2 = int log(1+|x|) mu(dx),                kappa >= pi / (20 I_2).
    """
    cfg = cfg or BoundsConfig()
    ext = cfg.scan(lambda x: math.log1p(x) * mu_tail(sp, x))
    d2 = math.inf if ext.at_boundary else ext.value
    try:
        I2, _ = mu_integral(sp, lambda y: math.log1p(abs(y)))
    except (NonConvergenceError, InfiniteMassError):
        I2 = math.inf
    return {
        "delta_2": d2, "I_2": I2,
        "lambda1_lower": math.pi / (80 * d2) if d2 < math.inf else None,
        "kappa_lower": math.pi / (20 * I2) if I2 < math.inf else None,
    }


def stable_mixture_example_bounds(c1, c2, alpha, sp, cfg=None):
    """psi = c1 xi^2 + c2 |xi|^alpha, which is WLSC(alpha, 1):

    lambda_1 >= pi (alpha-1) / 80 * inf_x (c1/|x| + c2 |x|^{1-alpha}) / mu((-|x|,|x|)^c)
    kappa    >= pi (alpha-1) / (20 int (c1/|x| + c2 |x|^{1-alpha})^{-1} mu(dx))
    """
    cfg = cfg or BoundsConfig()
    env = lambda x: c1 / x + c2 * x ** (1 - alpha)
    ext = cfg.scan(lambda x: _safe_ratio(env(x), mu_tail(sp, x)), mode="min")
    try:
        J, _ = mu_integral(sp, lambda y: 0.0 if y == 0 else 1.0 / env(abs(y)))
    except (NonConvergenceError, InfiniteMassError):
        J = math.inf
    return {
        "inf_ratio": ext.value, "integral": J,
        "lambda1_lower": None if ext.at_boundary else math.pi * (alpha - 1) / 80 * ext.value,
        "kappa_lower": math.pi * (alpha - 1) / (20 * J) if J < math.inf else None,
    }


def require_finite_mass(sp):
    """mu(R), raising InfiniteMassError when the bounds' standing hypothesis fails."""
    return mu_total(sp)
