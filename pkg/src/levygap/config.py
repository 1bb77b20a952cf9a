"""Run configuration: JSON schema validation, presets and object builders."""

from __future__ import annotations

import copy
import json
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .bounds import BoundsConfig
from .harmonic import QuadConfig
from .simulator import SimConfig
from .speed import SpeedFunction
from .symbol import CharacteristicExponent

__all__ = ["PRESETS", "load_schema", "validate_config", "load_config", "symbol_from_dict",
           "speed_from_dict", "quad_from_dict", "bounds_from_dict", "sim_from_dict"]

_EXP1 = {"family": "exp", "params": {"b": 1.0}}

PRESETS = {
    "stable": {
        "symbol": {"family": "stable", "alpha": 1.5},
        "speed": _EXP1,
        "bounds": {"specialized": "stable"},
        "sim": {"n_paths": 4000, "T": 10.0, "x0": 2.0, "observable": "clipped"},
    },
    "brownian-exp": {
        "symbol": {"family": "brownian", "sigma2": 1.0},
        "speed": _EXP1,
        "sim": {"n_paths": 10000, "T": 20.0, "x0": 2.0, "observable": "clipped",
                "eps": 0.05, "return_x0": 1.0, "return_paths": 4000},
    },
    "stable-mixture": {
        "symbol": {"family": "stable_mixture", "c1": 1.0, "c2": 1.0, "alpha": 1.5},
        "speed": _EXP1,
        "bounds": {"specialized": "stable_mixture"},
        "sim": {"n_paths": 4000, "T": 10.0, "x0": 2.0, "observable": "clipped"},
    },
    "cauchy-brownian": {
        "symbol": {"family": "cauchy_plus_brownian"},
        "speed": _EXP1,
        "bounds": {"specialized": "cauchy_brownian"},
        "sim": {"n_paths": 2000, "T": 5.0, "x0": 2.0, "observable": "clipped"},
    },
}


def load_schema():
    text = resources.files("levygap").joinpath("config.schema.json").read_text("utf-8")
    return json.loads(text)


def validate_config(cfg):
    """Raise jsonschema.ValidationError unless ``cfg`` matches the schema."""
    jsonschema.validate(cfg, load_schema())
    sym = cfg["symbol"]
    if sym["family"] == "tabulated" and "table" not in sym and not ("xi" in sym and "psi" in sym):
        raise jsonschema.ValidationError("tabulated symbol needs 'table' or both 'xi' and 'psi'")
    spd = cfg["speed"]
    if spd["family"] == "tabulated":
        if "tail_power" not in spd:
            raise jsonschema.ValidationError("tabulated speed needs 'tail_power'")
        if "table" not in spd and not ("x" in spd and "a" in spd):
            raise jsonschema.ValidationError("tabulated speed needs 'table' or both 'x' and 'a'")
    return cfg


def load_config(path=None, preset=None):
    """Merge a preset (if any) with a JSON file (if any) and validate the result.

    Relative table paths are resolved against the config file's directory.
    """
    if path is None and preset is None:
        raise ValueError("need a config path or a preset name")
    cfg = {}
    if preset is not None:
        if preset not in PRESETS:
            raise KeyError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        cfg = copy.deepcopy(PRESETS[preset])
    if path is not None:
        path = Path(path)
        user = json.loads(path.read_text("utf-8"))
        for block in ("symbol", "speed"):
            if block in user:
                user[block] = _resolve_table(user[block], path.parent)
        cfg = _merge(cfg, user)
    return validate_config(cfg)


def _merge(base, over):
    out = dict(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k not in ("symbol", "speed"):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _resolve_table(block, root):
    if isinstance(block, dict) and "table" in block and not Path(block["table"]).is_absolute():
        block = dict(block, table=str(root / block["table"]))
    return block


def _read_table(path):
    arr = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
    if arr.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns")
    return arr[:, 0], arr[:, 1]


def symbol_from_dict(d):
    fam = d["family"]
    if fam == "stable":
        return CharacteristicExponent.stable(d["alpha"], d.get("scale", d.get("c2", 1.0)))
    if fam == "brownian":
        return CharacteristicExponent.brownian(d.get("sigma2", 1.0))
    if fam == "stable_mixture":
        return CharacteristicExponent.stable_mixture(d["c1"], d["c2"], d["alpha"])
    if fam == "cauchy_plus_brownian":
        return CharacteristicExponent.cauchy_plus_brownian()
    if fam == "tabulated":
        xi, psi = _read_table(d["table"]) if "table" in d else (d["xi"], d["psi"])
        return CharacteristicExponent.tabulated(xi, psi, tail_power=d.get("tail_power"))
    raise ValueError(f"unknown symbol family {fam!r}")


def speed_from_dict(d):
    fam = d["family"]
    p = d.get("params", {})
    if fam == "exp":
        return SpeedFunction.exp_growth(p.get("b", 1.0))
    if fam == "poly":
        return SpeedFunction.poly_growth(p["p"], p.get("c", 1.0))
    if fam == "constant":
        return SpeedFunction.constant(p.get("c", 1.0))
    if fam == "tabulated":
        x, a = _read_table(d["table"]) if "table" in d else (d["x"], d["a"])
        return SpeedFunction.tabulated(x, a, d["tail_power"])
    raise ValueError(f"unknown speed family {fam!r}")


def quad_from_dict(d):
    return QuadConfig(**(d or {}))


def bounds_from_dict(d, threads=1):
    d = {k: v for k, v in (d or {}).items() if k not in ("wlsc", "specialized")}
    return BoundsConfig(threads=threads, **d)


_SIM_KEYS = ("n_paths", "T", "dt", "seed", "init", "x0", "n_out", "block_size")


def sim_from_dict(d, threads=1, seed=None):
    kw = {k: d[k] for k in _SIM_KEYS if k in d}
    if seed is not None:
        kw["seed"] = seed
    return SimConfig(threads=threads, **kw)
