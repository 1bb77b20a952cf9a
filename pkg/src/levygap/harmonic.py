"""The harmonic function H of the process killed at the origin.

    H(x) = (1/pi) int_0^inf (1 - cos(x s)) / psi(s) ds
    H'(x) = (1/pi) int_0^inf s sin(x s) / psi(s) ds

Equivalently H(x) = int_0^inf (p_s(0) - p_s(x)) ds in terms of the
transition density, which is never computed here.

Both integrals are evaluated by splitting the half line.  The smooth head
is handled by adaptive Gauss-Kronrod.  On the tail, the oscillatory factor
is integrated one half-period at a time between consecutive zeros of the
trigonometric factor (fixed Gauss-Legendre per half period), and the
resulting alternating series is summed by iterated averaging of its
partial sums.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gamma

from .errors import DomainError, NonConvergenceError
from .symbol import Family, psi_star

__all__ = [
    "QuadConfig",
    "HarmonicEvaluator",
    "omega",
    "stable_H",
    "wlsc_H_upper",
    "accelerate_alternating",
    "oscillatory_tail",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


@dataclass(frozen=True)
class QuadConfig:
    atol: float = 1e-10
    rtol: float = 1e-8
    max_half_periods: int = 4096
    depth: int = 8
    closed_form: bool = True

    def key(self):
        return (self.atol, self.rtol, self.max_half_periods, self.depth, self.closed_form)


def omega(alpha):
    """omega_alpha = -1 / (cos(pi alpha / 2) Gamma(alpha)), positive for alpha in (1, 2)."""
    return -1.0 / (math.cos(math.pi * alpha / 2) * gamma(alpha))


def stable_H(alpha, x, scale=1.0):
    """Closed form H for psi = scale |xi|^alpha."""
    return omega(alpha) * abs(x) ** (alpha - 1) / (2 * scale)


def accelerate_alternating(partial_sums, depth):
    """Repeatedly average adjacent partial sums of an alternating series.

    Uses the last ``depth + 1`` partial sums and returns the single value
    left after ``depth`` rounds of averaging.
    """
    s = np.asarray(partial_sums[-(depth + 1):], dtype=float)
    for _ in range(len(s) - 1):
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[0])


def oscillatory_tail(g, x, start, kind, cfg, chunk=32):
    """int_start^inf g(s) trig(x s) ds for trig = cos or sin, x > 0.

    ``g`` is vectorised, smooth and decreasing to 0 on the range.  Returns
    (value, error estimate).
    """
    trig = np.cos if kind == "cos" else np.sin
    period = math.pi / x
    shift = 0.5 if kind == "cos" else 0.0
    # first zero of trig(x s) at or beyond start
    k0 = math.ceil(start / period - shift)
    z0 = (k0 + shift) * period
    head, head_err = 0.0, 0.0
    if z0 > start:
        f = (lambda s: g(np.array([s]))[0] * math.cos(x * s)) if kind == "cos" else \
            (lambda s: g(np.array([s]))[0] * math.sin(x * s))
        head, head_err = integrate.quad(f, start, z0, epsabs=cfg.atol / 8,
                                        epsrel=cfg.rtol / 8, limit=200)

    u = 0.5 * (_GL_NODES + 1.0)
    w = 0.5 * _GL_WEIGHTS * period
    terms = []
    prev = None
    n = 0
    scale = 0.0
    while True:
        k = np.arange(n, n + chunk)[:, None]
        s = z0 + period * (k + u[None, :])
        terms.append((g(s) * trig(x * s)) @ w)
        n += chunk
        sums = np.cumsum(np.concatenate(terms))
        est = accelerate_alternating(sums, cfg.depth)
        scale = max(scale, abs(est) + abs(head))
        if prev is not None:
            diff = abs(est - prev)
            if diff <= max(cfg.atol, cfg.rtol * scale) / 8:
                return head + est, head_err + diff
        if n >= cfg.max_half_periods:
            raise NonConvergenceError(
                f"oscillatory tail not converged after {n} half periods", head + est)
        prev = est
        chunk *= 2


class HarmonicEvaluator:
    """Memoising evaluator of H and H' for a fixed symbol and quadrature config.

    The memo table is shared by all threads using the evaluator and is
    guarded by a lock; values depend only on the arguments, so concurrent
    use cannot change results.
    """

    def __init__(self, psi, quad=None):
        self.psi = psi
        self.quad = quad or QuadConfig()
        self._cache = {}
        self._lock = threading.Lock()

    def _key(self, kind, x):
        return (kind, self.psi.key(), self.quad.key(), float(f"{x:.15g}"))

    def _memo(self, kind, x, compute):
        key = self._key(kind, x)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        val = compute(x)
        with self._lock:
            self._cache.setdefault(key, val)
        return val

    @property
    def has_closed_form(self):
        return self.quad.closed_form and self.psi.family in (Family.STABLE, Family.BROWNIAN)

    # -- H ------------------------------------------------------------------

    def H(self, x):
        """H(x) as a float."""
        return self.eval_H(x)[0]

    def H_array(self, xs):
        return np.array([self.eval_H(float(v))[0] for v in np.ravel(xs)]).reshape(np.shape(xs))

    def eval_H(self, x):
        """Return (H(x), error estimate)."""
        if not math.isfinite(x):
            raise ValueError("x must be finite")
        x = abs(float(x))
        if x == 0.0:
            return 0.0, 0.0
        if self.has_closed_form:
            psi = self.psi
            if psi.family is Family.STABLE:
                return stable_H(psi.alpha, x, psi.c2), 0.0
            return x / (2 * psi.sigma2), 0.0
        return self._memo("H", x, self._H_quad)

    def _H_quad(self, x):
        psi, cfg = self.psi, self.quad
        s0 = 1.0 / x
        taylor_cut = 1e-8 / x

        def head_f(s):
            if s < taylor_cut:
                return 0.5 * x * x * s * s / psi.scalar(s) if s > 0 else 0.0
            h = math.sin(0.5 * x * s)
            return 2.0 * h * h / psi.scalar(s)

        head, e1 = integrate.quad(head_f, 0.0, s0, epsabs=cfg.atol / 4,
                                  epsrel=cfg.rtol / 4, limit=200)

        flat, e2 = _inverse_psi_tail(psi, s0, cfg)
        osc, e3 = oscillatory_tail(lambda s: 1.0 / psi(s), x, s0, "cos", cfg)
        value = (head + flat - osc) / math.pi
        return value, (e1 + e2 + e3) / math.pi

    # -- H' -----------------------------------------------------------------

    def H_prime(self, x):
        return self.eval_H_prime(x)[0]

    def eval_H_prime(self, x):
        """Return (H'(x), error estimate); H' is odd."""
        if x == 0 or not math.isfinite(x):
            raise ValueError("H' requires finite x != 0")
        sign = 1.0 if x > 0 else -1.0
        ax = abs(float(x))
        if self.has_closed_form:
            psi = self.psi
            if psi.family is Family.STABLE:
                a = psi.alpha
                return sign * (a - 1) * omega(a) * ax ** (a - 2) / (2 * psi.c2), 0.0
            return sign / (2 * psi.sigma2), 0.0
        v, e = self._memo("dH", ax, self._H_prime_quad)
        return sign * v, e

    def _H_prime_quad(self, x):
        psi, cfg = self.psi, self.quad
        first = math.pi / x

        def head_f(t):
            return t * math.sin(x * t) / psi.scalar(t) if t > 0 else 0.0

        head, e1 = integrate.quad(head_f, 0.0, first, epsabs=cfg.atol / 4,
                                  epsrel=cfg.rtol / 4, limit=200)
        osc, e2 = oscillatory_tail(lambda t: t / psi(t), x, first, "sin", cfg)
        return (head + osc) / math.pi, (e1 + e2) / math.pi


def _inverse_psi_tail(psi, s0, cfg):
    """int_{s0}^inf ds / psi(s): quadrature in log s up to a far cut, then a
    power-law completion with the local growth exponent at the cut."""
    cut = max(1e8 * s0, 1e8)

    def f(u):
        s = math.exp(u)
        return s / psi.scalar(s)

    mid, err = integrate.quad(f, math.log(s0), math.log(cut), epsabs=cfg.atol / 4,
                              epsrel=cfg.rtol / 4, limit=400)
    p_loc = math.log(psi.scalar(2 * cut) / psi.scalar(cut)) / math.log(2.0)
    if p_loc <= 1:
        raise NonConvergenceError("int ds/psi diverges: local tail exponent <= 1", mid)
    tail = cut / ((p_loc - 1) * psi.scalar(cut))
    return mid + tail, err


def wlsc_H_upper(psi, w, x):
    """Envelope H(x) <= 10 / (pi beta^2 (delta_s - 1) x psi*(1/x)) for x > 0."""
    if w.delta_s <= 1:
        raise DomainError(f"envelope needs delta_s > 1, got {w.delta_s}")
    if x <= 0:
        raise ValueError("x must be positive")
    return 10.0 / (math.pi * w.beta ** 2 * (w.delta_s - 1) * x * psi_star(psi, 1.0 / x))
