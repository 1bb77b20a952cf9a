"""Speed functions a(x) and the reversible measure mu(dx) = dx / a(x).

The time-changed process runs the base process on the clock
A_t = int_0^t ds / a(X_s); its symmetrising (and, when finite, stationary)
measure is mu(dx) = a(x)^{-1} dx, the Revuz measure of A.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from .errors import InfiniteMassError, NonConvergenceError

__all__ = ["SpeedFamily", "SpeedFunction", "mu_tail", "mu_tail_right", "mu_tail_left",
           "mu_total", "mu_integral", "mu_interval"]


class SpeedFamily(str, enum.Enum):
    EXP_GROWTH = "exp"
    POLY_GROWTH = "poly"
    CONSTANT = "constant"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class SpeedFunction:
    """A positive, locally bounded speed function.

    ``exp``: a(x) = exp(b |x|).  ``poly``: a(x) = c (1 + |x|)^p.
    ``constant``: a(x) = c (infinite mu-mass; only useful for simulation).
    ``tabulated``: monotone-cubic interpolation of (x, a(x)) samples, with
    a(x) ~ a(x_edge) (|x| / |x_edge|)^tail_power beyond the grid.  A grid
    on x >= 0 only is mirrored to the negative axis.
    """

    family: SpeedFamily
    b: float = 1.0
    p: float = 0.0
    c: float = 1.0
    x_grid: np.ndarray | None = field(default=None, repr=False)
    a_grid: np.ndarray | None = field(default=None, repr=False)
    tail_power: float | None = None

    @classmethod
    def exp_growth(cls, b=1.0):
        if b <= 0:
            raise ValueError("b must be positive")
        return cls(SpeedFamily.EXP_GROWTH, b=float(b))

    @classmethod
    def poly_growth(cls, p, c=1.0):
        if c <= 0:
            raise ValueError("c must be positive")
        return cls(SpeedFamily.POLY_GROWTH, p=float(p), c=float(c))

    @classmethod
    def constant(cls, c=1.0):
        if c <= 0:
            raise ValueError("c must be positive")
        return cls(SpeedFamily.CONSTANT, c=float(c))

    @classmethod
    def tabulated(cls, x, a, tail_power):
        x = np.asarray(x, dtype=float)
        a = np.asarray(a, dtype=float)
        if x.ndim != 1 or x.shape != a.shape or x.size < 2:
            raise ValueError("x and a must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(x) <= 0):
            raise ValueError("x grid must be strictly increasing")
        if np.any(a <= 0) or not np.all(np.isfinite(a)):
            raise ValueError("a must be finite and positive")
        if x[0] >= 0:
            if x[0] == 0:
                x, a = np.concatenate([-x[:0:-1], x]), np.concatenate([a[:0:-1], a])
            else:
                x, a = np.concatenate([-x[::-1], x]), np.concatenate([a[::-1], a])
        elif x[-1] <= 0:
            raise ValueError("tabulated speed must cover both sides of 0 or only x >= 0")
        x.setflags(write=False)
        a.setflags(write=False)
        return cls(SpeedFamily.TABULATED, x_grid=x, a_grid=a, tail_power=float(tail_power))

    @property
    def is_symmetric(self):
        if self.family is not SpeedFamily.TABULATED:
            return True
        x, a = self.x_grid, self.a_grid
        return bool(np.array_equal(x, -x[::-1]) and np.array_equal(a, a[::-1]))

    def key(self):
        if self.family is SpeedFamily.TABULATED:
            return (self.family.value, self.x_grid.tobytes(), self.a_grid.tobytes(),
                    self.tail_power)
        return (self.family.value, self.b, self.p, self.c)

    def to_dict(self):
        if self.family is SpeedFamily.EXP_GROWTH:
            return {"family": "exp", "params": {"b": self.b}}
        if self.family is SpeedFamily.POLY_GROWTH:
            return {"family": "poly", "params": {"p": self.p, "c": self.c}}
        if self.family is SpeedFamily.CONSTANT:
            return {"family": "constant", "params": {"c": self.c}}
        return {"family": "tabulated", "x": self.x_grid.tolist(), "a": self.a_grid.tolist(),
                "tail_power": self.tail_power}

    def _pchip(self):
        cached = self.__dict__.get("_pchip_cache")
        if cached is None:
            cached = PchipInterpolator(self.x_grid, self.a_grid, extrapolate=False)
            object.__setattr__(self, "_pchip_cache", cached)
        return cached

    def __call__(self, x):
        """Vectorised a(x)."""
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        fam = self.family
        if fam is SpeedFamily.EXP_GROWTH:
            return np.exp(self.b * ax)
        if fam is SpeedFamily.POLY_GROWTH:
            return self.c * (1.0 + ax) ** self.p
        if fam is SpeedFamily.CONSTANT:
            return np.full_like(x, self.c)
        lo, hi = self.x_grid[0], self.x_grid[-1]
        out = np.empty_like(x)
        inside = (x >= lo) & (x <= hi)
        out[inside] = self._pchip()(x[inside])
        right = x > hi
        left = x < lo
        out[right] = self.a_grid[-1] * (x[right] / hi) ** self.tail_power
        out[left] = self.a_grid[0] * (x[left] / lo) ** self.tail_power
        return out

    def inv(self, x):
        """Scalar 1 / a(x), the density of mu."""
        ax = abs(x)
        fam = self.family
        if fam is SpeedFamily.EXP_GROWTH:
            return math.exp(-self.b * ax)
        if fam is SpeedFamily.POLY_GROWTH:
            return (1.0 + ax) ** -self.p / self.c
        if fam is SpeedFamily.CONSTANT:
            return 1.0 / self.c
        return 1.0 / float(self(np.array([x]))[0])


# ---------------------------------------------------------------------------
# tail masses


def _one_sided(sp, x, side):
    """mu((x, inf)) for side=+1 or mu((-inf, -x)) for side=-1, x >= 0."""
    fam = sp.family
    if fam is SpeedFamily.EXP_GROWTH:
        return math.exp(-sp.b * x) / sp.b
    if fam is SpeedFamily.POLY_GROWTH:
        if sp.p <= 1:
            raise InfiniteMassError(f"poly speed with p={sp.p} <= 1 has infinite tail mass")
        return (1.0 + x) ** (1.0 - sp.p) / (sp.c * (sp.p - 1.0))
    if fam is SpeedFamily.CONSTANT:
        raise InfiniteMassError("constant speed has infinite tail mass")
    if sp.tail_power <= 1:
        raise InfiniteMassError(
            f"declared tail power {sp.tail_power} <= 1: tail of 1/a is not integrable")
    edge = sp.x_grid[-1] if side > 0 else -sp.x_grid[0]
    a_edge = sp.a_grid[-1] if side > 0 else sp.a_grid[0]
    # power-law completion beyond the grid edge
    start = max(x, edge)
    tail = edge / (a_edge * (sp.tail_power - 1.0)) * (start / edge) ** (1.0 - sp.tail_power)
    if x >= edge:
        return tail
    return _inner_mass(sp, x if side > 0 else -x, side) + tail


def _segment_masses(sp):
    """Masses of mu between consecutive grid knots, computed once per speed."""
    cached = sp.__dict__.get("_segments")
    if cached is None:
        xg = sp.x_grid
        seg = np.array([integrate.quad(sp.inv, lo, hi, epsabs=1e-14, epsrel=1e-12)[0]
                        for lo, hi in zip(xg[:-1], xg[1:])])
        cached = (seg, np.concatenate([[0.0], np.cumsum(seg)]))
        object.__setattr__(sp, "_segments", cached)
    return cached


def _inner_mass(sp, x, side):
    """mu((x, right edge)) for side=+1, mu((left edge, x)) for side=-1; x inside the grid."""
    xg = sp.x_grid
    seg, cum = _segment_masses(sp)
    x = min(max(x, xg[0]), xg[-1])
    i = min(int(np.searchsorted(xg, x, side="right")) - 1, len(seg) - 1)
    if side > 0:
        part = integrate.quad(sp.inv, x, xg[i + 1], epsabs=1e-14, epsrel=1e-12)[0]
        return part + (cum[-1] - cum[i + 1])
    part = integrate.quad(sp.inv, xg[i], x, epsabs=1e-14, epsrel=1e-12)[0]
    return cum[i] + part


def mu_tail_right(sp, x):
    """mu((x, inf)) for x >= 0."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    return _one_sided(sp, x, +1)


def mu_tail_left(sp, x):
    """mu((-inf, -x)) for x >= 0."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    return _one_sided(sp, x, -1)


def mu_tail(sp, x):
    """mu((-x, x)^c) = int_{|y| >= x} dy / a(y)."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if sp.is_symmetric:
        return 2.0 * _one_sided(sp, x, +1)
    return _one_sided(sp, x, +1) + _one_sided(sp, x, -1)


def mu_total(sp):
    """mu(R); raises InfiniteMassError when the mass diverges."""
    return mu_tail(sp, 0.0)


def mu_interval(sp, lo, hi):
    """mu((lo, hi)) for lo <= hi."""
    if sp.family in (SpeedFamily.EXP_GROWTH, SpeedFamily.POLY_GROWTH, SpeedFamily.CONSTANT):
        def F(x):  # signed antiderivative of 1/a vanishing at 0
            ax = abs(x)
            if sp.family is SpeedFamily.EXP_GROWTH:
                v = (1.0 - math.exp(-sp.b * ax)) / sp.b
            elif sp.family is SpeedFamily.CONSTANT:
                v = ax / sp.c
            elif sp.p == 1:
                v = math.log1p(ax) / sp.c
            else:
                v = (1.0 - (1.0 + ax) ** (1.0 - sp.p)) / (sp.c * (sp.p - 1.0))
            return math.copysign(v, x)
        return F(hi) - F(lo)
    try:
        return _right_of(sp, lo) - _right_of(sp, hi)
    except InfiniteMassError:
        pass
    pts = [p for p in (sp.x_grid[0], sp.x_grid[-1]) if lo < p < hi]
    v, _ = integrate.quad(sp.inv, lo, hi, epsabs=1e-13, epsrel=1e-11, limit=400,
                          points=pts or None)
    return v


def _right_of(sp, x):
    # mu((x, inf)) for any real x
    if x >= 0:
        return _one_sided(sp, x, +1)
    return _one_sided(sp, 0.0, +1) + _one_sided(sp, 0.0, -1) - _one_sided(sp, -x, -1)


def mu_integral(sp, f, breakpoints=(), epsabs=1e-11, epsrel=1e-9):
    """int f(y) mu(dy) over the real line; returns (value, error estimate).

    The line is split at 0, +-1, the knots of a tabulated grid (its edges
    only, for grids over 200 points) and any extra ``breakpoints``; the
    outer pieces are integrated to +-infinity.
    """
    edges = ()
    if sp.x_grid is not None:
        edges = sp.x_grid if sp.x_grid.size <= 200 else (sp.x_grid[0], sp.x_grid[-1])
    pts = sorted({0.0, -1.0, 1.0, *map(float, edges), *map(float, breakpoints)})
    g = lambda y: f(y) * sp.inv(y)
    pieces = [(-np.inf, pts[0])] + list(zip(pts[:-1], pts[1:])) + [(pts[-1], np.inf)]
    total, err = 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for lo, hi in pieces:
            try:
                v, e = integrate.quad(g, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=400)
            except integrate.IntegrationWarning as exc:
                raise NonConvergenceError(
                    f"mu-integral did not converge on ({lo}, {hi}): {exc}", total) from None
            if not math.isfinite(v):
                raise NonConvergenceError(f"mu-integral not finite on ({lo}, {hi})", total)
            total += v
            err += e
    return total, err
