"""Symmetric characteristic exponents psi and their structural conditions.

A symmetric Levy process X on the line is determined by its characteristic
exponent psi, defined by E exp(i xi X_t) = exp(-t psi(xi)).  The built-in
families are all of the form

    psi(xi) = g * xi**2 + j * |xi|**alpha

with a Gaussian coefficient ``g`` and a jump coefficient ``j``.  Tabulated
symbols are interpolated with a monotone cubic and extrapolated by a
declared power law.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from .errors import ExtrapolationError

__all__ = [
    "Family",
    "CharacteristicExponent",
    "WlscParams",
    "Verdict",
    "ConditionReport",
    "eval_psi",
    "psi_star",
    "check_conditions",
    "fit_wlsc",
    "verify_wlsc",
    "power_law_exponent",
]


class Family(str, enum.Enum):
    STABLE = "stable"
    BROWNIAN = "brownian"
    STABLE_MIXTURE = "stable_mixture"
    CAUCHY_PLUS_BROWNIAN = "cauchy_plus_brownian"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class CharacteristicExponent:
    """A symmetric characteristic exponent.

    Use the classmethod constructors rather than filling the fields by hand.
    ``c1`` and ``c2`` are the Gaussian and jump weights of the mixture form;
    for ``Stable`` only ``c2`` (the scale, default 1) is used and for
    ``Brownian`` only ``sigma2``.
    """

    family: Family
    alpha: float = float("nan")
    c1: float = 0.0
    c2: float = 0.0
    sigma2: float = 0.0
    levy_measure_note: str | None = None
    xi_grid: np.ndarray | None = field(default=None, repr=False)
    psi_grid: np.ndarray | None = field(default=None, repr=False)
    tail_power: float | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def stable(cls, alpha, scale=1.0):
        if not 0.0 < alpha <= 2.0:
            raise ValueError("stable index must lie in (0, 2]")
        if scale <= 0:
            raise ValueError("scale must be positive")
        return cls(Family.STABLE, alpha=float(alpha), c2=float(scale),
                   levy_measure_note=f"symmetric {alpha}-stable")

    @classmethod
    def brownian(cls, sigma2=1.0):
        if sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        return cls(Family.BROWNIAN, alpha=2.0, sigma2=float(sigma2),
                   levy_measure_note="none (pure Gaussian)")

    @classmethod
    def stable_mixture(cls, c1, c2, alpha):
        if c1 < 0 or c2 < 0 or (c1 == 0 and c2 == 0):
            raise ValueError("c1, c2 must be nonnegative and not both zero")
        if not 0.0 < alpha <= 2.0:
            raise ValueError("stable index must lie in (0, 2]")
        return cls(Family.STABLE_MIXTURE, alpha=float(alpha), c1=float(c1),
                   c2=float(c2), levy_measure_note=f"c2 x symmetric {alpha}-stable")

    @classmethod
    def cauchy_plus_brownian(cls):
        """psi(xi) = xi**2 + |xi|: Brownian motion plus an independent Cauchy process."""
        return cls(Family.CAUCHY_PLUS_BROWNIAN, alpha=1.0, c1=1.0, c2=1.0,
                   levy_measure_note="Cauchy: dx / (pi x^2)")

    @classmethod
    def tabulated(cls, xi, psi, tail_power=None, note=None):
        xi = np.asarray(xi, dtype=float)
        psi = np.asarray(psi, dtype=float)
        if xi.ndim != 1 or xi.shape != psi.shape or xi.size < 2:
            raise ValueError("xi and psi must be 1-d arrays of equal length >= 2")
        if np.any(xi < 0) or np.any(np.diff(xi) <= 0):
            raise ValueError("xi grid must be nonnegative and strictly increasing")
        if np.any(psi < 0) or not np.all(np.isfinite(psi)):
            raise ValueError("psi values must be finite and nonnegative")
        if xi[0] > 0:
            xi = np.concatenate([[0.0], xi])
            psi = np.concatenate([[0.0], psi])
        if psi[0] != 0:
            raise ValueError("psi(0) must be 0")
        if tail_power is not None and tail_power <= 0:
            raise ValueError("tail_power must be positive")
        xi.setflags(write=False)
        psi.setflags(write=False)
        return cls(Family.TABULATED, xi_grid=xi, psi_grid=psi,
                   tail_power=None if tail_power is None else float(tail_power),
                   levy_measure_note=note)

    # -- derived coefficients ---------------------------------------------

    @property
    def gaussian_coef(self):
        if self.family is Family.BROWNIAN:
            return self.sigma2
        if self.family is Family.TABULATED:
            return float("nan")
        return self.c1

    @property
    def jump_coef(self):
        return 0.0 if self.family is Family.BROWNIAN else self.c2

    @property
    def is_closed_form(self):
        return self.family is not Family.TABULATED

    def key(self):
        """Hashable identity used for memoisation."""
        if self.family is Family.TABULATED:
            return (self.family.value, self.xi_grid.tobytes(), self.psi_grid.tobytes(),
                    self.tail_power)
        return (self.family.value, self.alpha, self.c1, self.c2, self.sigma2)

    def to_dict(self):
        d = {"family": self.family.value}
        if self.family is Family.TABULATED:
            d["xi"] = self.xi_grid.tolist()
            d["psi"] = self.psi_grid.tolist()
            d["tail_power"] = self.tail_power
        else:
            d.update(alpha=self.alpha, c1=self.c1, c2=self.c2, sigma2=self.sigma2)
        return d

    # -- evaluation -------------------------------------------------------

    def _pchip(self):
        cached = self.__dict__.get("_pchip_cache")
        if cached is None:
            cached = PchipInterpolator(self.xi_grid, self.psi_grid, extrapolate=False)
            object.__setattr__(self, "_pchip_cache", cached)
        return cached

    def __call__(self, xi):
        """Vectorised psi(|xi|)."""
        a = np.abs(np.asarray(xi, dtype=float))
        if self.family is not Family.TABULATED:
            g, j = self.gaussian_coef, self.jump_coef
            out = g * a * a
            if j:
                out = out + j * a ** self.alpha
            return out
        xmax = self.xi_grid[-1]
        out = np.empty_like(a)
        inside = a <= xmax
        out[inside] = self._pchip()(a[inside])
        if np.any(~inside):
            if self.tail_power is None:
                raise ExtrapolationError(
                    f"xi={a[~inside].max():g} beyond tabulated grid end {xmax:g} "
                    "and no tail_power declared")
            out[~inside] = self.psi_grid[-1] * (a[~inside] / xmax) ** self.tail_power
        return out

    def scalar(self, xi):
        """Fast scalar evaluation for use inside adaptive quadrature."""
        a = abs(xi)
        if self.family is Family.TABULATED:
            return float(self(np.array([a]))[0])
        out = self.gaussian_coef * a * a
        if self.c2 and self.family is not Family.BROWNIAN:
            out += self.c2 * a ** self.alpha
        return out


def eval_psi(psi, xi):
    """Evaluate psi at ``xi``; scalar in, float out."""
    if np.ndim(xi) == 0:
        if not math.isfinite(xi):
            raise ValueError("xi must be finite")
        return psi.scalar(float(xi))
    return psi(xi)


def psi_star(psi, x):
    """Running supremum sup_{|u| <= x} psi(u).

    For the closed-form families psi is nondecreasing on [0, inf) and this
    is psi(x).  The monotone cubic used for tabulated symbols has no
    interior extrema between nodes, so there the supremum is the larger of
    the node values up to x and psi(x) itself.
    """
    if x < 0:
        raise ValueError("x must be nonnegative")
    if psi.family is not Family.TABULATED:
        return psi.scalar(x)
    m = float(psi.psi_grid[psi.xi_grid <= x].max())
    return max(m, psi.scalar(x))


# ---------------------------------------------------------------------------
# structural conditions


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionReport:
    a1: Verdict
    a1_diagnostic: str
    a2: Verdict
    a2_diagnostic: str
    a3: Verdict
    a3_diagnostic: str
    tail_exponent_estimate: float
    origin_exponent_estimate: float

    @property
    def all_hold(self):
        return self.a1 is self.a2 is self.a3 is Verdict.HOLDS

    def to_dict(self):
        return {
            "a1": self.a1.value, "a1_diagnostic": self.a1_diagnostic,
            "a2": self.a2.value, "a2_diagnostic": self.a2_diagnostic,
            "a3": self.a3.value, "a3_diagnostic": self.a3_diagnostic,
            "tail_exponent_estimate": self.tail_exponent_estimate,
            "origin_exponent_estimate": self.origin_exponent_estimate,
        }


def power_law_exponent(psi, lo, hi, n=41):
    """Least-squares slope of log psi against log xi on [lo, hi]."""
    xi = np.geomspace(lo, hi, n)
    vals = psi(xi)
    if np.any(vals <= 0):
        return float("nan")
    slope, _ = np.polyfit(np.log(xi), np.log(vals), 1)
    return float(slope)


def _windows(psi, tail_start, origin_eps):
    tail = (tail_start, 100 * tail_start)
    origin = (origin_eps, 1.0)
    if psi.family is Family.TABULATED:
        pos = psi.xi_grid[psi.xi_grid > 0]
        if psi.tail_power is None:
            tail = (pos[-1] / 100, pos[-1])
        lo = max(origin_eps, pos[0])
        origin = (lo, max(1.0, 100 * lo))
    return tail, origin


def _decade_increments(psi, n_decades=12):
    # J(eps) = int_eps^1 dx/psi over successive decades; returns the ratio of
    # the last two decade contributions (~1 for log-divergence, 10**(p-1) for
    # exponent p).
    incs = []
    for k in range(n_decades - 2, n_decades):
        a, b = 10.0 ** -(k + 1), 10.0 ** -k
        # substitute x = e^u to keep the integrand O(1) on the decade
        v, _ = integrate.quad(lambda u: math.exp(u) / psi.scalar(math.exp(u)),
                              math.log(a), math.log(b), epsrel=1e-10)
        incs.append(v)
    return incs[1] / incs[0]


def check_conditions(psi, tail_start=1e3, origin_eps=1e-6, margin=0.05, q=1.0):
    """Numerically classify conditions (A1)-(A3) for ``psi``.

    Tail and origin growth exponents come from log-log regression on
    ``[tail_start, 100 * tail_start]`` and ``[origin_eps, 1]``.  An exponent
    within ``margin`` of the threshold 1 gives an inconclusive verdict,
    except for (A2), where the decade increments of int_eps^1 dx/psi are
    used as a tie-break (constant increments mean logarithmic divergence).
    Never raises on quadrature trouble.
    """
    tail_win, origin_win = _windows(psi, tail_start, origin_eps)
    try:
        p_inf = power_law_exponent(psi, *tail_win)
    except ExtrapolationError as exc:
        p_inf = float("nan")
        tail_note = f"tail unavailable: {exc}"
    else:
        tail_note = f"tail exponent {p_inf:.4f} on [{tail_win[0]:g}, {tail_win[1]:g}]"
    p0 = power_law_exponent(psi, *origin_win)

    # (A3): psi(t)/t -> infinity
    if not math.isfinite(p_inf):
        a3, a3_msg = Verdict.INCONCLUSIVE, tail_note
    elif abs(p_inf - 1) < margin:
        a3, a3_msg = Verdict.INCONCLUSIVE, tail_note + " within margin of 1"
    else:
        a3 = Verdict.HOLDS if p_inf > 1 else Verdict.FAILS
        a3_msg = tail_note

    # (A1): int_0^inf dx/(q + psi) finite
    if a3 is not Verdict.HOLDS:
        a1 = a3
        a1_msg = tail_note + ("; integral diverges" if a3 is Verdict.FAILS else "")
    else:
        a1, a1_msg = _check_a1(psi, q, tail_note, p_inf)

    # (A2): int_0^1 dx/psi infinite
    origin_note = f"origin exponent {p0:.4f} on [{origin_win[0]:g}, {origin_win[1]:g}]"
    if not math.isfinite(p0):
        a2, a2_msg = Verdict.INCONCLUSIVE, origin_note
    elif abs(p0 - 1) >= margin:
        a2 = Verdict.HOLDS if p0 > 1 else Verdict.FAILS
        a2_msg = origin_note
    else:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                ratio = _decade_increments(psi)
        except (integrate.IntegrationWarning, ZeroDivisionError, ExtrapolationError) as exc:
            a2, a2_msg = Verdict.INCONCLUSIVE, f"{origin_note}; tie-break failed: {exc}"
        else:
            msg = f"{origin_note}; decade increment ratio {ratio:.4f}"
            if ratio >= 0.97:
                a2 = Verdict.HOLDS
            elif ratio <= 0.9:
                a2 = Verdict.FAILS
            else:
                a2 = Verdict.INCONCLUSIVE
            a2_msg = msg
    return ConditionReport(a1, a1_msg, a2, a2_msg, a3, a3_msg, p_inf, p0)


def _check_a1(psi, q, tail_note, p_inf, x_cut=1e6):
    # numeric part on [0, x_cut], power-law completion beyond
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            head, _ = integrate.quad(lambda x: 1.0 / (q + psi.scalar(x)), 0.0, 1.0)
            mid, _ = integrate.quad(
                lambda u: math.exp(u) / (q + psi.scalar(math.exp(u))),
                0.0, math.log(x_cut), limit=200)
    except (integrate.IntegrationWarning, ExtrapolationError) as exc:
        return Verdict.INCONCLUSIVE, f"{tail_note}; quadrature did not converge: {exc}"
    tail = x_cut / ((p_inf - 1.0) * (q + psi.scalar(x_cut)))
    value = head + tail
    if not math.isfinite(value):
        return Verdict.INCONCLUSIVE, f"{tail_note}; quadrature returned {value}"
    return Verdict.HOLDS, f"{tail_note}; int_0^inf dx/({q:g}+psi) = {value:.6g}"


# ---------------------------------------------------------------------------
# weak lower scaling


@dataclass(frozen=True)
class WlscParams:
    """psi in WLSC(delta_s, beta): psi(l t) >= beta l**delta_s psi(t) for l >= 1."""

    delta_s: float
    beta: float

    def __post_init__(self):
        if not self.delta_s > 0:
            raise ValueError("delta_s must be positive")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must lie in (0, 1]")


DEFAULT_THETA = np.geomspace(1e-8, 1e8, 161)
DEFAULT_LAMBDA = np.geomspace(1.0, 1e3, 31)


def _scaling_ratios(psi, theta, lam):
    theta = np.asarray(theta, dtype=float)
    lam = np.asarray(lam, dtype=float)
    num = psi(np.outer(lam, theta))
    den = psi(theta)[None, :]
    return num / den, lam


def fit_wlsc(psi, theta_grid=None, lambda_grid=None, stability=0.02):
    """Largest scaling exponent in (1, 2.5] (step 0.01) with a stable infimum.

    For each candidate ``d`` the constant beta(d) is the grid infimum of
    psi(l t) / (l**d psi(t)).  A finite grid gives a positive infimum for
    every ``d``, so a candidate is only accepted when beta(d) does not drop
    by more than ``stability`` (relative), at any theta, between the lambda
    range [1, sqrt(L)] and the full range [1, L]: a genuine scaling bound
    cannot keep decaying as lambda grows.  Returns None when no candidate passes.
    """
    theta = DEFAULT_THETA if theta_grid is None else np.asarray(theta_grid, float)
    lam = DEFAULT_LAMBDA if lambda_grid is None else np.asarray(lambda_grid, float)
    if np.any(theta <= 0) or np.any(lam < 1):
        raise ValueError("theta must be positive and lambda >= 1")
    lam = np.unique(np.concatenate([[1.0], lam]))
    r, lam = _scaling_ratios(psi, theta, lam)
    logl = np.log(lam)[:, None]
    half = lam <= math.sqrt(lam[-1]) * (1 + 1e-12)
    candidates = np.round(np.arange(101, 251) / 100.0, 2)
    best = None
    for d in candidates:
        scaled = r * np.exp(-d * logl)
        col_full = scaled.min(axis=0)
        col_half = scaled[half].min(axis=0)
        beta = float(col_full.min())
        if not 0 < beta <= 1:
            continue
        if np.any(col_full < (1 - stability) * col_half):
            continue
        best = WlscParams(float(d), beta)
    return best


def verify_wlsc(psi, w, theta_grid=None, lambda_grid=None, rtol=1e-12):
    """Check psi(l t) >= beta l**delta_s psi(t) at every grid point."""
    theta = DEFAULT_THETA if theta_grid is None else np.asarray(theta_grid, float)
    lam = DEFAULT_LAMBDA if lambda_grid is None else np.asarray(lambda_grid, float)
    lhs = psi(np.outer(lam, theta))
    rhs = w.beta * lam[:, None] ** w.delta_s * psi(theta)[None, :]
    return bool(np.all(lhs >= rhs * (1 - rtol)))
