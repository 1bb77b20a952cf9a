"""Monte Carlo simulation of time-changed symmetric Levy processes.

The base process X has exact independent increments: over base time s the
Gaussian part is Normal(0, 2 g s) and the stable part is (j s)^{1/alpha}
times a standard symmetric stable variate (Chambers-Mallows-Stuck), so
that E exp(i xi X_s) = exp(-s psi(xi)).

Y_t = X_{tau_t}, where tau inverts the clock A_s = int_0^s du / a(X_u).
On a fixed base grid A is a left-endpoint sum.  The ensemble engine
uses an adaptive base grid and trapezoidal sums (see ``SimConfig``).

Random numbers are counter based: path ``i`` under seed ``s`` draws from
its own Philox stream keyed by (s, i), consumed in a fixed order.  Paths
are processed in fixed-size blocks, so results do not depend on how
blocks are scheduled over threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InfiniteMassError, NoSignalError, UnsupportedFamilyError
from .speed import SpeedFamily, mu_integral, mu_total
from .symbol import Family

__all__ = [
    "SimConfig",
    "FitConfig",
    "PathEnsemble",
    "DecayEstimate",
    "ReturnTimeEstimate",
    "path_rng",
    "standard_symmetric_stable",
    "sample_base_path",
    "sample_base_paths",
    "time_change",
    "simulate_ensemble",
    "estimate_decay_rate",
    "estimate_return_time",
    "OBSERVABLES",
]

X_FAR = 1e100
SIMULABLE = (Family.STABLE, Family.BROWNIAN, Family.STABLE_MIXTURE, Family.CAUCHY_PLUS_BROWNIAN)


def path_rng(seed, path_id):
    """Generator for one path: Philox keyed by (seed, path_id)."""
    key = (int(seed) % 2**64) << 64 | (int(path_id) % 2**64)
    return np.random.Generator(np.random.Philox(key=key))


def standard_symmetric_stable(alpha, v, w):
    """CMS map from V ~ U(-pi/2, pi/2), W ~ Exp(1) to a variate with cf exp(-|xi|^alpha)."""
    if alpha == 1.0:
        return np.tan(v)
    return (np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * v) / w) ** ((1.0 - alpha) / alpha))


def _check_simulable(psi):
    if psi.family not in SIMULABLE:
        raise UnsupportedFamilyError(f"cannot simulate symbol family {psi.family.value!r}")


def _draws(gen, n, psi):
    # fixed draw order per chunk: normals, then (uniform, exponential) pairs
    z = gen.standard_normal(n) if psi.gaussian_coef > 0 else None
    if psi.jump_coef > 0:
        v = gen.uniform(-math.pi / 2, math.pi / 2, n)
        w = gen.standard_exponential(n)
    else:
        v = w = None
    return z, v, w


def _increments(psi, s, z, v, w):
    """Levy increments over base durations ``s`` from standardised draws."""
    out = 0.0
    g, j = psi.gaussian_coef, psi.jump_coef
    if g > 0:
        out = out + np.sqrt(2.0 * g * s) * z
    if j > 0:
        out = out + (j * s) ** (1.0 / psi.alpha) * standard_symmetric_stable(psi.alpha, v, w)
    return out


# ---------------------------------------------------------------------------
# fixed-grid base paths


def sample_base_paths(psi, T, dt, seed, path_ids):
    """X on the grid t_k = k dt, k = 0..n, for each path id; shape (len(ids), n + 1)."""
    _check_simulable(psi)
    n = int(round(T / dt))
    if n < 1:
        raise ValueError("T must be at least one step")
    out = np.zeros((len(path_ids), n + 1))
    for row, pid in enumerate(path_ids):
        z, v, w = _draws(path_rng(seed, pid), n, psi)
        out[row, 1:] = np.cumsum(_increments(psi, dt, z, v, w))
    return out


def sample_base_path(psi, T, dt, seed, path_id):
    """One path of X started at 0 on the grid k dt."""
    return sample_base_paths(psi, T, dt, seed, [path_id])[0]


def time_change(x_path, sp, dt, output_times):
    """Y at ``output_times`` from a fixed-grid base path.

    Returns (Y, tau, truncated): tau is the base time found by linear
    inversion of the left-Riemann clock, Y the base path at the grid point
    at or before tau, and ``truncated`` is True when the clock never
    reaches the largest output time (those entries are NaN).
    """
    x_path = np.asarray(x_path, dtype=float)
    t = np.asarray(output_times, dtype=float)
    rate = 1.0 / sp(x_path[:-1])
    A = np.concatenate([[0.0], np.cumsum(rate * dt)])
    # absorb cumsum rounding so grid-aligned times land on their own node
    k = np.searchsorted(A, t * (1 + 1e-12) + 1e-15, side="right") - 1
    ok = t <= A[-1] * (1 + 1e-12)
    k = np.clip(k, 0, len(A) - 1)
    nxt = np.minimum(k + 1, len(A) - 1)
    gap = A[nxt] - A[k]
    frac = np.where(gap > 0, np.clip((t - A[k]) / np.where(gap > 0, gap, 1.0), 0.0, 1.0), 0.0)
    tau = np.where(ok, (k + frac) * dt, np.nan)
    y = np.where(ok, x_path[k], np.nan)
    return y, tau, bool(not ok.all())


# ---------------------------------------------------------------------------
# ensemble engine on an adaptive base grid


@dataclass(frozen=True)
class SimConfig:
    """Ensemble parameters.

    ``dt`` is the largest clock (Y-time) step; the base step at x is
    min(a(x) dt, cap(x)), where cap(x) keeps the increment scale below
    ``rel_step * max(|x|, 1)``.  Where a = 1 the base step equals dt.
    """

    n_paths: int = 10_000
    T: float = 20.0
    dt: float | None = None
    seed: int = 0
    init: str = "point"
    x0: float = 2.0
    n_out: int = 201
    rel_step: float = 0.25
    max_steps: int | None = None
    block_size: int = 4096
    chunk: int = 128
    threads: int = 1

    @property
    def step(self):
        return self.dt if self.dt is not None else 1e-3 * self.T

    @property
    def step_limit(self):
        return self.max_steps if self.max_steps is not None else int(200 * self.T / self.step)

    def output_times(self):
        return np.linspace(0.0, self.T, self.n_out)

    def to_dict(self):
        d = dict(self.__dict__)
        d.pop("threads")
        d["dt"] = self.step
        return d


class _Streams:
    """Per-path generators with chunked standardised draws."""

    def __init__(self, psi, seed, path_ids, chunk):
        self.psi = psi
        self.gens = [path_rng(seed, pid) for pid in path_ids]
        self.chunk = chunk
        n = len(path_ids)
        self.z = np.zeros((n, chunk))
        self.v = np.zeros((n, chunk))
        self.w = np.ones((n, chunk))
        self.pos = np.full(n, chunk)

    def initial_uniforms(self):
        return np.array([g.random() for g in self.gens])

    def take(self, rows):
        """Next standardised draw for each row in ``rows``."""
        empty = rows[self.pos[rows] >= self.chunk]
        for r in empty:
            z, v, w = _draws(self.gens[r], self.chunk, self.psi)
            if z is not None:
                self.z[r] = z
            if v is not None:
                self.v[r] = v
                self.w[r] = w
            else:
                # pure Gaussian: uniforms for the bridge crossing test instead
                self.v[r] = self.gens[r].random(self.chunk)
            self.pos[r] = 0
        p = self.pos[rows]
        self.pos[rows] = p + 1
        return self.z[rows, p], self.v[rows, p], self.w[rows, p]


def _step_cap(psi, x, rel):
    scale = rel * np.maximum(np.abs(x), 1.0)
    cap = np.full_like(x, np.inf)
    if psi.gaussian_coef > 0:
        cap = np.minimum(cap, scale ** 2 / (2.0 * psi.gaussian_coef))
    if psi.jump_coef > 0:
        cap = np.minimum(cap, scale ** psi.alpha / psi.jump_coef)
    return cap


def _run_block(psi, sp, cfg, path_ids, x_init, t_out=None, eps=None, crossing=False):
    """Advance a block of paths on the adaptive grid.

    With ``t_out`` records Y at those clock times until the last is passed.
    With ``eps`` stops each path at its first entry into [-eps, eps] (or a
    sign change when ``crossing``) and records the clock time of entry.
    """
    n = len(path_ids)
    streams = _Streams(psi, cfg.seed, path_ids, cfg.chunk)
    x = x_init(streams)
    A = np.zeros(n)
    h = cfg.step
    active = np.ones(n, dtype=bool)
    y = None
    hit = None
    if t_out is not None:
        y = np.full((n, len(t_out)), np.nan)
    if eps is not None:
        hit = np.full(n, np.nan)
        inside = np.abs(x) <= eps
        hit[inside] = 0.0
        active &= ~inside
    # a(x) overflows on far excursions; 1/a = 0 there is the right limit
    with np.errstate(over="ignore"):
        return _advance(psi, sp, cfg, streams, x, A, active, y, hit, t_out, eps, crossing, h)


def _advance(psi, sp, cfg, streams, x, A, active, y, hit, t_out, eps, crossing, h):
    steps = 0
    if t_out is not None:
        nxt = np.zeros(len(x), dtype=int)
        n_out = len(t_out)
    while active.any() and steps < cfg.step_limit:
        steps += 1
        rows = np.flatnonzero(active)
        xr = x[rows]
        a = sp(xr)
        s = np.minimum(a * h, _step_cap(psi, xr, cfg.rel_step))
        z, v, w = streams.take(rows)
        # heavy jumps from far out can overflow; at |x| = X_FAR the clock rate
        # 1/a is zero to machine precision for every integrable speed
        x_new = np.clip(xr + _increments(psi, s, z, v, w), -X_FAR, X_FAR)
        A_new = A[rows] + 0.5 * s * (1.0 / a + 1.0 / sp(x_new))
        if t_out is not None:
            while True:
                j = nxt[rows]
                m = j < n_out
                m[m] = t_out[j[m]] < A_new[m]
                if not m.any():
                    break
                y[rows[m], j[m]] = xr[m]
                nxt[rows[m]] += 1
            done = nxt[rows] >= n_out
            active[rows[done]] = False
        if eps is not None:
            entered = np.abs(x_new) <= eps
            d0 = np.abs(xr) - eps
            d1 = np.abs(x_new) - eps
            # linear interpolation of the clock inside the step for crossings
            frac = np.clip(d0 / np.maximum(np.abs(x_new - xr), 1e-300), 0.0, 1.0)
            if crossing:
                entered |= np.sign(x_new) * np.sign(xr) < 0
                # Brownian bridge between grid points dips into the band with
                # probability exp(-d0 d1 / (g s)); v is a spare U(0,1) here
                same = ~entered
                p_dip = np.exp(-d0 * d1 / (psi.gaussian_coef * s))
                dip = same & (v < p_dip)
                entered |= dip
                frac = np.where(dip, d0 / (d0 + d1), frac)
            hit[rows[entered]] = (A[rows] + frac * (A_new - A[rows]))[entered]
            active[rows[entered]] = False
        x[rows] = x_new
        A[rows] = A_new
    return y, hit, active.copy(), A


def _blocks(cfg):
    ids = np.arange(cfg.n_paths)
    return [ids[i:i + cfg.block_size] for i in range(0, cfg.n_paths, cfg.block_size)]


def _map_blocks(fn, blocks, threads):
    if threads <= 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, blocks))


def stationary_sampler(sp, n_grid=10_000, tail_rtol=1e-12):
    """Inverse-CDF map u -> x for the normalised measure mu / mu(R)."""
    total = mu_total(sp)
    L = 1.0
    from .speed import mu_tail
    while mu_tail(sp, L) > tail_rtol * total:
        L *= 2.0
    xs = np.linspace(-L, L, n_grid)
    dens = 1.0 / sp(xs)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(xs))])
    cdf /= cdf[-1]
    return lambda u: np.interp(u, cdf, xs)


@dataclass
class PathEnsemble:
    seed: int
    n_paths: int
    horizon: float
    dt: float
    initial_law: str
    output_times: np.ndarray
    paths: np.ndarray = field(repr=False)  # Y at output times, NaN after truncation
    truncated: np.ndarray = field(repr=False)
    metadata: dict = field(default_factory=dict)

    @property
    def n_truncated(self):
        return int(self.truncated.sum())


def _initial(sp, cfg):
    if cfg.init == "point":
        return lambda streams: np.full(len(streams.gens), float(cfg.x0))
    if cfg.init == "stationary":
        inv = stationary_sampler(sp)
        return lambda streams: inv(streams.initial_uniforms())
    raise ValueError(f"unknown initial law {cfg.init!r}")


def simulate_ensemble(psi, sp, cfg):
    """Simulate ``cfg.n_paths`` paths of Y and record them at the output times."""
    _check_simulable(psi)
    if cfg.init == "stationary":
        mu_total(sp)  # raises InfiniteMassError
    t_out = cfg.output_times()
    init = _initial(sp, cfg)
    res = _map_blocks(lambda ids: _run_block(psi, sp, cfg, ids, init, t_out=t_out),
                      _blocks(cfg), cfg.threads)
    Y = np.concatenate([r[0] for r in res])
    trunc = np.concatenate([r[2] for r in res])
    return PathEnsemble(cfg.seed, cfg.n_paths, cfg.T, cfg.step, cfg.init, t_out, Y, trunc,
                        {"symbol": psi.to_dict(), "speed": sp.to_dict(), "sim": cfg.to_dict()})


# ---------------------------------------------------------------------------
# estimators


def _clipped(y):
    return np.sign(y) * np.minimum(np.abs(y), 1.0)


OBSERVABLES = {
    "clipped": _clipped,
    "sign": np.sign,
    "tanh": np.tanh,
    "constant": lambda y: np.ones_like(y),
}


@dataclass(frozen=True)
class FitConfig:
    n_boot: int = 200
    seed: int = 12345
    start_frac: float = 0.5
    noise_mult: float = 5.0
    min_points: int = 3


@dataclass
class DecayEstimate:
    rate: float
    ci_low: float
    ci_high: float
    observable: str
    window: tuple
    residual_norm: float
    target: float
    n_points: int
    curve: np.ndarray = field(repr=False, default=None)
    noise: np.ndarray = field(repr=False, default=None)

    def to_dict(self):
        return {"rate": self.rate, "ci_low": self.ci_low, "ci_high": self.ci_high,
                "observable": self.observable, "window": list(self.window),
                "residual_norm": self.residual_norm, "target": self.target,
                "n_points": self.n_points}


def _slope(t, logm):
    A = np.vstack([t, np.ones_like(t)]).T
    coef, res, *_ = np.linalg.lstsq(A, logm, rcond=None)
    resid = float(np.sqrt(res[0])) if res.size else 0.0
    return float(coef[0]), resid


def estimate_decay_rate(ens, f, fit=None, target=None, name=None):
    """Exponential decay rate of m(t) = |mean f(Y_t) - mu(f)/mu(R)|.

    The fit window runs from the first time m(t) < start_frac * m(0) to
    the first later time where m(t) drops below noise_mult times the
    bootstrap standard error of the mean.  ``target`` overrides the
    stationary mean (needed when mu(R) is infinite).
    """
    fit = fit or FitConfig()
    if isinstance(f, str):
        name, f = f, OBSERVABLES[f]
    name = name or getattr(f, "__name__", "f")
    if target is None:
        sp = _speed_from(ens)
        total = mu_total(sp)
        target = mu_integral(sp, lambda y: float(f(np.array([y]))[0]))[0] / total
    F = f(ens.paths)
    t = ens.output_times
    mean = np.nanmean(F, axis=0)
    rng = np.random.default_rng(fit.seed)
    n = F.shape[0]
    boot = np.empty((fit.n_boot, F.shape[1]))
    for b in range(fit.n_boot):
        boot[b] = np.nanmean(F[rng.integers(0, n, n)], axis=0)
    noise = boot.std(axis=0, ddof=1)
    m = np.abs(mean - target)
    floor = fit.noise_mult * noise
    if not (m[0] > floor[0] and m[0] > 1e-12 * (1 + abs(target))):
        raise NoSignalError("observable indistinguishable from its stationary mean at t=0")
    below = np.flatnonzero(m < fit.start_frac * m[0])
    if below.size == 0:
        raise NoSignalError("m(t) never decays below start_frac * m(0)")
    i0 = int(below[0])
    lost = np.flatnonzero(m[i0:] < floor[i0:])
    i1 = i0 + int(lost[0]) if lost.size else len(t)
    if i1 - i0 < fit.min_points:
        raise NoSignalError(f"only {i1 - i0} points above the noise floor in the fit window")
    sl = slice(i0, i1)
    slope, resid = _slope(t[sl], np.log(m[sl]))
    rate = -slope
    rates = []
    for b in range(fit.n_boot):
        mb = np.abs(boot[b, sl] - target)
        if np.all(mb > 0):
            rates.append(-_slope(t[sl], np.log(mb))[0])
    lo, hi = np.percentile(rates, [2.5, 97.5]) if rates else (rate, rate)
    return DecayEstimate(rate, float(min(lo, rate)), float(max(hi, rate)), name,
                         (float(t[i0]), float(t[i1 - 1])), resid, float(target), i1 - i0,
                         curve=m, noise=noise)


def _speed_from(ens):
    from .config import speed_from_dict
    return speed_from_dict(ens.metadata["speed"])


@dataclass
class ReturnTimeEstimate:
    mean: float
    ci_low: float
    ci_high: float
    std_error: float
    eps: float
    x0: float
    n_paths: int
    n_censored: int

    @property
    def censored(self):
        return self.n_censored > 0

    def to_dict(self):
        return dict(self.__dict__, censored=self.censored)


def estimate_return_time(psi, sp, cfg, eps, x0):
    """Mean clock time for Y started at ``x0`` to enter [-eps, eps].

    Interval entry happens no later than hitting the point 0, so the
    estimate is biased low relative to E_x0 tau_0.  For the Brownian family
    a sign change between grid points also counts as entry, and so does a
    visit of the band by the Brownian bridge between grid points.  Paths
    not entering within the step limit are censored at their final clock value.
    """
    _check_simulable(psi)
    if eps <= 0:
        raise ValueError("eps must be positive")
    crossing = psi.family is Family.BROWNIAN
    init = lambda streams: np.full(len(streams.gens), float(x0))
    res = _map_blocks(
        lambda ids: _run_block(psi, sp, cfg, ids, init, eps=eps, crossing=crossing),
        _blocks(cfg), cfg.threads)
    hit = np.concatenate([r[1] for r in res])
    alive = np.concatenate([r[2] for r in res])
    clock = np.concatenate([r[3] for r in res])
    times = np.where(alive, clock, hit)
    n = len(times)
    mean = float(times.mean())
    se = float(times.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return ReturnTimeEstimate(mean, mean - 1.96 * se, mean + 1.96 * se, se, float(eps),
                              float(x0), n, int(alive.sum()))
