"""End-to-end analysis: conditions, functionals, bounds, serialisation."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from dataclasses import dataclass, field

from .bounds import (
    BoundsConfig,
    cauchy_brownian_bounds,
    compute_delta,
    compute_I_and_kappa,
    lambda0_bracket,
    lambda1_lower,
    stable_mixture_example_bounds,
    stable_specialized_bounds,
    wlsc_bounds,
)
from .harmonic import HarmonicEvaluator, QuadConfig
from .speed import mu_total
from .symbol import ConditionReport, Verdict, check_conditions, fit_wlsc

__all__ = ["ErgodicityReport", "analyze", "config_hash", "report_to_json", "curves_csv"]

REPORT_SCHEMA_VERSION = 1


def config_hash(obj):
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class ErgodicityReport:
    delta: float
    delta_plus: float
    delta_minus: float
    delta_argsup: float
    lambda1_lower: float | None
    I_value: float
    kappa_lower: float | None
    M0_upper: float
    lambda0_lower: float | None
    lambda0_upper: float | None
    mu_total: float
    conditions: ConditionReport
    wlsc: dict | None
    wlsc_bounds: dict | None
    specialized: dict | None
    errors: dict
    provenance: dict
    timings: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict, repr=False)

    @property
    def has_bound(self):
        return self.lambda1_lower is not None or self.kappa_lower is not None

    def to_dict(self):
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "delta": _num(self.delta),
            "delta_plus": _num(self.delta_plus),
            "delta_minus": _num(self.delta_minus),
            "delta_argsup": _num(self.delta_argsup),
            "lambda1_lower": _num(self.lambda1_lower),
            "I_value": _num(self.I_value),
            "kappa_lower": _num(self.kappa_lower),
            "M0_upper": _num(self.M0_upper),
            "lambda0_lower": _num(self.lambda0_lower),
            "lambda0_upper": _num(self.lambda0_upper),
            "mu_total": _num(self.mu_total),
            "conditions": self.conditions.to_dict(),
            "wlsc": self.wlsc,
            "wlsc_bounds": _clean(self.wlsc_bounds),
            "specialized": _clean(self.specialized),
            "errors": _clean(self.errors),
            "provenance": self.provenance,
            "timings": self.timings,
            "curves": {k: [float(v) for v in vals] for k, vals in self.curves.items()},
        }


def _num(v):
    # JSON has no infinity; infinite functionals become the string "inf"
    if v is None:
        return None
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return v


def _clean(d):
    if d is None:
        return None
    return {k: (_clean(v) if isinstance(v, dict) else _num(v) if isinstance(v, (int, float))
                and not isinstance(v, bool) else v) for k, v in d.items()}


def analyze(psi, sp, quad=None, bounds=None, with_wlsc=True, specialized=None,
            config=None):
    """Run the whole bound pipeline for one (symbol, speed) pair.

    Raises InfiniteMassError if mu(R) is infinite (no bound applies).
    ``specialized`` selects a closed-form path for a particular symbol:
    "stable", "cauchy_brownian" or "stable_mixture".
    """
    quad = quad or QuadConfig()
    bounds = bounds or BoundsConfig()
    t = {}
    t0 = time.perf_counter()
    total = mu_total(sp)
    cond = check_conditions(psi)
    t["conditions"] = time.perf_counter() - t0

    ev = HarmonicEvaluator(psi, quad)
    t0 = time.perf_counter()
    d = compute_delta(ev, sp, bounds)
    t["delta"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    I, kappa, M0, I_err = compute_I_and_kappa(ev, sp)
    t["I"] = time.perf_counter() - t0
    lo, hi = lambda0_bracket(d.delta, d.delta_plus, d.delta_minus)
    lam1 = lambda1_lower(d.delta)
    # the gap bound needs all three conditions, the uniform-rate bound only the first two
    a12 = cond.a1 is Verdict.HOLDS and cond.a2 is Verdict.HOLDS
    if not (a12 and cond.a3 is Verdict.HOLDS):
        lam1 = None
        lo = None
    if not a12:
        kappa = None

    w = wb = None
    if with_wlsc:
        t0 = time.perf_counter()
        w = fit_wlsc(psi)
        if w is not None and w.delta_s > 1:
            wb = wlsc_bounds(psi, w, sp, bounds)
        t["wlsc"] = time.perf_counter() - t0

    spec = None
    if specialized == "stable":
        spec = stable_specialized_bounds(psi.alpha, sp, bounds)
    elif specialized == "cauchy_brownian":
        spec = cauchy_brownian_bounds(sp, bounds)
    elif specialized == "stable_mixture":
        spec = stable_mixture_example_bounds(psi.c1, psi.c2, psi.alpha, sp, bounds)

    d_err = d.error
    errors = {
        "delta": d_err,
        "lambda1_lower": None if lam1 is None else d_err / (8 * d.delta ** 2),
        "I_value": I_err,
        "kappa_lower": None if kappa is None else I_err / (2 * I ** 2),
        "quad_atol": quad.atol,
        "quad_rtol": quad.rtol,
        "golden_tol": bounds.golden_tol,
    }
    cfg_dict = config if config is not None else {
        "symbol": psi.to_dict(), "speed": sp.to_dict(),
        "quad": quad.__dict__, "bounds": {k: v for k, v in bounds.__dict__.items()
                                          if k != "threads"},
    }
    prov = {"config_hash": config_hash(cfg_dict), "family": psi.family.value,
            "speed_family": sp.family.value, "possibly_infinite_delta": d.possibly_infinite}
    curves = {"x": d.curve_x, "H": d.curve_H, "mu_tail": d.curve_tail}
    return ErgodicityReport(
        delta=d.delta, delta_plus=d.delta_plus, delta_minus=d.delta_minus,
        delta_argsup=d.argsup, lambda1_lower=lam1, I_value=I, kappa_lower=kappa,
        M0_upper=M0, lambda0_lower=lo, lambda0_upper=hi, mu_total=total,
        conditions=cond,
        wlsc=None if w is None else {"delta_s": w.delta_s, "beta": w.beta},
        wlsc_bounds=None if wb is None else wb.to_dict(),
        specialized=spec, errors=errors, provenance=prov, timings=t, curves=curves,
    )


def report_to_json(report):
    return json.dumps(report.to_dict(), indent=2, sort_keys=True)


def curves_csv(report, label=""):
    """Objective curves x -> H(x), mu tail, H * mu tail as CSV text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["label", "x", "H", "mu_tail", "objective"])
    c = report.curves
    for x, h, m in zip(c["x"], c["H"], c["mu_tail"]):
        w.writerow([label, repr(float(x)), repr(float(h)), repr(float(m)), repr(float(h * m))])
    return buf.getvalue()

