"""Command line entry point: ``levygap analyze | simulate | report``.

Exit codes: 0 success, 1 computational failure, 2 no bound derivable,
3 symbol family cannot be simulated, 64 usage or configuration error,
65 report file does not match the expected layout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .config import (
    PRESETS,
    bounds_from_dict,
    load_config,
    quad_from_dict,
    sim_from_dict,
    speed_from_dict,
    symbol_from_dict,
)
from .errors import InfiniteMassError, LevyGapError, UnsupportedFamilyError
from .report import REPORT_SCHEMA_VERSION, analyze, config_hash, curves_csv, report_to_json
from .simulator import (
    OBSERVABLES,
    estimate_decay_rate,
    estimate_return_time,
    simulate_ensemble,
)
from .speed import mu_integral, mu_total

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_BOUND = 2
EXIT_UNSUPPORTED = 3
EXIT_USAGE = 64
EXIT_DATAERR = 65

RATE_MARGIN = 0.9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser():
    p = _Parser(prog="levygap", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", type=Path, help="JSON run configuration")
        sp.add_argument("--preset", choices=sorted(PRESETS), help="start from a shipped preset")
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")
        sp.add_argument("--seed", type=int, help="override sim.seed")
        sp.add_argument("--threads", type=int, default=1, help="worker threads")

    common(sub.add_parser("analyze", help="compute ergodicity bounds, write report.json and curves.csv"))
    common(sub.add_parser("simulate", help="Monte Carlo check of the bounds, write ensemble.json"))
    rp = sub.add_parser("report", help="merge report.json files into CSV tables")
    rp.add_argument("reports", nargs="*", type=Path)
    rp.add_argument("--out", type=Path, default=Path("."))
    return p


def _load(args):
    if args.config is None and args.preset is None:
        raise UsageError("one of --config or --preset is required")
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    if args.seed is not None and not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    try:
        return load_config(args.config, args.preset)
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError, KeyError, ValueError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        raise UsageError(f"invalid configuration: {msg}") from None


def _build(cfg):
    try:
        return symbol_from_dict(cfg["symbol"]), speed_from_dict(cfg["speed"])
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from None


def _analyze(cfg, threads):
    psi, sp = _build(cfg)
    b = cfg.get("bounds", {})
    return analyze(psi, sp, quad=quad_from_dict(cfg.get("quad")),
                   bounds=bounds_from_dict(b, threads), with_wlsc=b.get("wlsc", True),
                   specialized=b.get("specialized"), config=cfg)


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")


def cmd_analyze(args):
    cfg = _load(args)
    rep = _analyze(cfg, args.threads)
    label = cfg.get("output", {}).get("label", args.preset or "")
    _write(args.out / "report.json", report_to_json(rep) + "\n")
    _write(args.out / "curves.csv", curves_csv(rep, label))
    if not rep.has_bound:
        c = rep.conditions
        print(f"no bound: conditions not satisfied (A1 {c.a1.value}, A2 {c.a2.value}, "
              f"A3 {c.a3.value})", file=sys.stderr)
        return EXIT_NO_BOUND
    print(f"delta={rep.delta:.10g} lambda1_lower={_fmt(rep.lambda1_lower)} "
          f"I={rep.I_value:.10g} kappa_lower={_fmt(rep.kappa_lower)}")
    return EXIT_OK


def _fmt(v):
    return "none" if v is None else f"{v:.10g}"


def cmd_simulate(args):
    cfg = _load(args)
    if "sim" not in cfg:
        raise UsageError("configuration has no 'sim' block")
    psi, sp = _build(cfg)
    simd = cfg["sim"]
    sim = sim_from_dict(simd, threads=args.threads, seed=args.seed)
    rep = _analyze(cfg, args.threads)
    name = simd.get("observable", "clipped")
    f = OBSERVABLES[name]
    target = mu_integral(sp, lambda y: float(f(np.array([y]))[0]))[0] / rep.mu_total
    ens = simulate_ensemble(psi, sp, sim)
    est = estimate_decay_rate(ens, f, target=target, name=name)
    F = f(ens.paths)
    out = {
        "config": cfg,
        "config_hash": config_hash(cfg),
        "sim": sim.to_dict(),
        "n_truncated": ens.n_truncated,
        "observable": name,
        "output_times": ens.output_times.tolist(),
        "mean": np.nanmean(F, axis=0).tolist(),
        "std_error": (np.nanstd(F, axis=0, ddof=1) / math.sqrt(ens.n_paths)).tolist(),
        "decay": est.to_dict(),
        "comparison": _compare_rate(rep.lambda1_lower, est),
    }
    if simd.get("eps") is not None:
        rcfg = sim_from_dict(dict(simd, n_paths=simd.get("return_paths", sim.n_paths)),
                             threads=args.threads, seed=args.seed)
        rt = estimate_return_time(psi, sp, rcfg, simd["eps"], simd.get("return_x0", 1.0))
        out["return_time"] = rt.to_dict()
        out["return_comparison"] = {
            "M0_upper": rep.M0_upper if math.isfinite(rep.M0_upper) else None,
            "estimate": rt.mean, "ci_low": rt.ci_low, "ci_high": rt.ci_high,
            "verdict": "consistent" if rt.ci_low <= rep.M0_upper else "inconsistent",
        }
    _write(args.out / "ensemble.json", json.dumps(out, indent=2, sort_keys=True) + "\n")
    if simd.get("paths_csv"):
        _write(args.out / "paths.csv", _paths_csv(ens))
    cmp_ = out["comparison"]
    print(f"fitted rate={est.rate:.6g} [{est.ci_low:.6g}, {est.ci_high:.6g}] "
          f"lambda1_lower={_fmt(cmp_['lambda1_lower'])} verdict={cmp_['verdict']}")
    return EXIT_OK


def _compare_rate(lam1, est):
    if lam1 is None:
        verdict = "no bound"
    else:
        verdict = "consistent" if est.rate >= RATE_MARGIN * lam1 else "inconsistent"
    return {"lambda1_lower": lam1, "fitted_rate": est.rate, "ci_low": est.ci_low,
            "ci_high": est.ci_high, "margin": RATE_MARGIN, "verdict": verdict}


def _paths_csv(ens):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["path", "time", "Y"])
    for i, row in enumerate(ens.paths):
        for t, y in zip(ens.output_times, row):
            w.writerow([i, repr(float(t)), "" if np.isnan(y) else repr(float(y))])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# report merging

TABLE_COLUMNS = [
    "source", "family", "speed_family", "config_hash",
    "delta", "delta_err", "delta_plus", "delta_minus",
    "lambda1_lower", "lambda1_lower_err", "I_value", "I_value_err",
    "kappa_lower", "kappa_lower_err", "M0_upper", "lambda0_lower", "lambda0_upper",
    "lambda1_lower_wlsc", "kappa_lower_wlsc", "quad_atol", "quad_rtol", "golden_tol",
]
_REQUIRED = {"schema_version", "delta", "delta_plus", "delta_minus", "lambda1_lower",
             "I_value", "kappa_lower", "M0_upper", "lambda0_lower", "lambda0_upper",
             "errors", "provenance", "curves"}


class SchemaMismatch(Exception):
    pass


def _read_report(path):
    try:
        d = json.loads(Path(path).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaMismatch(f"{path}: not a readable JSON report ({exc})") from None
    if not isinstance(d, dict) or not _REQUIRED <= d.keys():
        raise SchemaMismatch(f"{path}: missing report fields")
    if d["schema_version"] != REPORT_SCHEMA_VERSION:
        raise SchemaMismatch(f"{path}: schema version {d['schema_version']!r}, "
                             f"expected {REPORT_SCHEMA_VERSION}")
    return d


def _cell(v):
    if v is None:
        return ""
    return repr(float(v)) if isinstance(v, (int, float)) and not isinstance(v, bool) else str(v)


def merge_reports(paths):
    """Return (bounds table CSV, merged curves CSV) for report files in the given order."""
    reports = [(str(p), _read_report(p)) for p in paths]
    t = io.StringIO()
    w = csv.writer(t, lineterminator="\r\n")
    w.writerow(TABLE_COLUMNS)
    c = io.StringIO()
    wc = csv.writer(c, lineterminator="\r\n")
    wc.writerow(["source", "x", "H", "mu_tail", "objective"])
    for src, d in reports:
        e, prov = d["errors"], d["provenance"]
        wl = d.get("wlsc_bounds") or {}
        row = {
            "source": src, "family": prov.get("family"), "speed_family": prov.get("speed_family"),
            "config_hash": prov.get("config_hash"),
            "delta_err": e.get("delta"), "lambda1_lower_err": e.get("lambda1_lower"),
            "I_value_err": e.get("I_value"), "kappa_lower_err": e.get("kappa_lower"),
            "lambda1_lower_wlsc": wl.get("lambda1_lower_wlsc"),
            "kappa_lower_wlsc": wl.get("kappa_lower_wlsc"),
            "quad_atol": e.get("quad_atol"), "quad_rtol": e.get("quad_rtol"),
            "golden_tol": e.get("golden_tol"),
        }
        for k in TABLE_COLUMNS:
            row.setdefault(k, d.get(k))
        w.writerow([_cell(row[k]) for k in TABLE_COLUMNS])
        cv = d["curves"]
        for x, h, m in zip(cv["x"], cv["H"], cv["mu_tail"]):
            wc.writerow([src, repr(x), repr(h), repr(m), repr(h * m)])
    return t.getvalue(), c.getvalue()


def cmd_report(args):
    if not args.reports:
        raise UsageError("no report files given")
    table, curves = merge_reports(args.reports)
    _write(args.out / "report_table.csv", table)
    _write(args.out / "report_curves.csv", curves)
    print(f"merged {len(args.reports)} report(s) into {args.out}")
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "simulate": cmd_simulate, "report": cmd_report}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"levygap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SchemaMismatch as exc:
        print(f"levygap: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    except InfiniteMassError as exc:
        print(f"levygap: no bound: theorem hypothesis fails, mu(R) is infinite ({exc})",
              file=sys.stderr)
        return EXIT_NO_BOUND
    except UnsupportedFamilyError as exc:
        print(f"levygap: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except LevyGapError as exc:
        print(f"levygap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
