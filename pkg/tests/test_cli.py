import csv
import json
import math
import subprocess
import sys

import jsonschema
import pytest

from levygap.cli import main
from levygap.config import PRESETS, load_config, load_schema


def write(path, obj):
    path.write_text(json.dumps(obj))
    return path


def run(*argv):
    return main([str(a) for a in argv])


SMALL_SIM = {"n_paths": 200, "T": 3.0, "x0": 2.0, "n_out": 31, "block_size": 64}


@pytest.fixture(scope="module")
def analyzed(tmp_path_factory):
    root = tmp_path_factory.mktemp("presets")
    codes = {p: run("analyze", "--preset", p, "--out", root / p) for p in PRESETS}
    return root, codes


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(load_schema())
    for p in PRESETS:
        load_config(preset=p)


def test_every_preset_analyzes_and_round_trips(analyzed, tmp_path):
    root, codes = analyzed
    assert codes == {p: 0 for p in PRESETS}
    reports = [root / p / "report.json" for p in PRESETS]
    assert run("report", *reports, "--out", tmp_path) == 0
    with open(tmp_path / "report_table.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["source"] for r in rows] == [str(r) for r in reports]
    for r in rows:
        assert float(r["lambda1_lower"]) > 0 and float(r["kappa_lower"]) > 0
        assert float(r["lambda0_lower"]) <= float(r["lambda0_upper"])
        assert float(r["delta_err"]) >= 0


def test_brownian_exp_report(analyzed):
    root, _ = analyzed
    d = json.loads((root / "brownian-exp" / "report.json").read_text())
    assert d["delta"] == pytest.approx(math.exp(-1), abs=1e-10)
    assert d["lambda1_lower"] == pytest.approx(math.e / 8, abs=1e-10)
    assert d["I_value"] == pytest.approx(1.0, abs=1e-10)
    assert d["kappa_lower"] == pytest.approx(0.5, abs=1e-10)
    assert "timings" in d and d["provenance"]["config_hash"]
    with open(root / "brownian-exp" / "curves.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["label", "x", "H", "mu_tail", "objective"]
    assert len(rows) == 201


def test_stable_mixture_report_has_scaling_bounds(analyzed):
    root, _ = analyzed
    d = json.loads((root / "stable-mixture" / "report.json").read_text())
    wl = d["wlsc_bounds"]["lambda1_lower_wlsc"]
    assert wl == pytest.approx(d["specialized"]["lambda1_lower"], rel=1e-9)
    assert 0 < wl < math.inf


def test_infinite_mass_has_no_bound(tmp_path, capsys):
    cfg = write(tmp_path / "c.json", {"symbol": {"family": "brownian"},
                                      "speed": {"family": "constant"}})
    assert run("analyze", "--config", cfg, "--out", tmp_path) == 2
    assert "hypothesis fails" in capsys.readouterr().err


def test_failed_conditions_have_no_bound(tmp_path):
    cfg = write(tmp_path / "c.json", {"symbol": {"family": "stable", "alpha": 0.5},
                                      "speed": {"family": "exp"}, "bounds": {"wlsc": False}})
    assert run("analyze", "--config", cfg, "--out", tmp_path) == 2
    assert json.loads((tmp_path / "report.json").read_text())["lambda1_lower"] is None


@pytest.mark.parametrize("cfg", [
    {"symbol": {"family": "brownian"}, "speed": {"family": "exp"}, "extra": 1},
    {"symbol": {"family": "levy"}, "speed": {"family": "exp"}},
    {"symbol": {"family": "brownian", "sigma2": -1}, "speed": {"family": "exp"}},
    {"symbol": {"family": "brownian"}, "speed": {"family": "tabulated", "x": [0, 1], "a": [1, 2]}},
    {"symbol": {"family": "tabulated"}, "speed": {"family": "exp"}},
    {"speed": {"family": "exp"}},
])
def test_invalid_config_is_usage_error(tmp_path, cfg):
    assert run("analyze", "--config", write(tmp_path / "c.json", cfg)) == 64


def test_usage_errors(tmp_path):
    assert run("analyze") == 64
    assert run("analyze", "--config", tmp_path / "missing.json") == 64
    (tmp_path / "bad.json").write_text("{not json")
    assert run("analyze", "--config", tmp_path / "bad.json") == 64
    with pytest.raises(SystemExit) as e:
        run("analyze", "--preset", "nope")
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        run("frobnicate")
    assert e.value.code == 64


def test_tabulated_inputs_from_csv(tmp_path):
    import numpy as np
    xi = np.geomspace(1e-7, 1e4, 300)
    np.savetxt(tmp_path / "psi.csv", np.c_[xi, xi ** 1.5], delimiter=",")
    x = np.linspace(0, 8, 81)
    np.savetxt(tmp_path / "a.csv", np.c_[x, np.exp(x)], delimiter=",")
    cfg = write(tmp_path / "c.json", {
        "symbol": {"family": "tabulated", "table": "psi.csv", "tail_power": 1.5},
        "speed": {"family": "tabulated", "table": "a.csv", "tail_power": 6},
    })
    assert run("analyze", "--config", cfg, "--out", tmp_path / "o") == 0
    d = json.loads((tmp_path / "o" / "report.json").read_text())
    assert d["conditions"]["a1"] == "holds" and d["delta"] > 0


def test_preset_with_overrides(tmp_path):
    cfg = write(tmp_path / "c.json", {"quad": {"rtol": 1e-6}, "sim": {"n_paths": 10}})
    merged = load_config(cfg, "brownian-exp")
    assert merged["quad"]["rtol"] == 1e-6
    assert merged["sim"]["n_paths"] == 10 and merged["sim"]["T"] == 20.0


def test_simulate_small(tmp_path):
    cfg = write(tmp_path / "s.json", {"symbol": {"family": "brownian"},
                                      "speed": {"family": "exp"}, "sim": SMALL_SIM})
    assert run("simulate", "--config", cfg, "--out", tmp_path / "a") == 0
    assert run("simulate", "--config", cfg, "--out", tmp_path / "b") == 0
    a = (tmp_path / "a" / "ensemble.json").read_bytes()
    assert a == (tmp_path / "b" / "ensemble.json").read_bytes()
    d = json.loads(a)
    assert d["comparison"]["verdict"] == "consistent"
    assert d["decay"]["ci_low"] <= d["decay"]["rate"] <= d["decay"]["ci_high"]
    assert run("simulate", "--config", cfg, "--seed", 5, "--out", tmp_path / "c") == 0
    assert (tmp_path / "c" / "ensemble.json").read_bytes() != a


def test_simulate_return_time_and_paths_csv(tmp_path):
    sim = dict(SMALL_SIM, eps=0.1, return_x0=1.0, return_paths=100, paths_csv=True)
    cfg = write(tmp_path / "s.json", {"symbol": {"family": "brownian"},
                                      "speed": {"family": "exp"}, "sim": sim})
    assert run("simulate", "--config", cfg, "--out", tmp_path) == 0
    d = json.loads((tmp_path / "ensemble.json").read_text())
    assert d["return_comparison"]["M0_upper"] == pytest.approx(2.0, abs=1e-9)
    with open(tmp_path / "paths.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["path", "time", "Y"] and len(rows) == 1 + 200 * 31


def test_simulate_exit_codes(tmp_path):
    tab = write(tmp_path / "t.json", {"symbol": {"family": "tabulated", "xi": [0, 1, 2],
                                                 "psi": [0, 1, 4], "tail_power": 2},
                                      "speed": {"family": "exp"}, "sim": SMALL_SIM})
    assert run("simulate", "--config", tab) == 3
    const = write(tmp_path / "k.json", {"symbol": {"family": "brownian"}, "speed": {"family": "exp"},
                                        "sim": dict(SMALL_SIM, observable="constant")})
    assert run("simulate", "--config", const, "--out", tmp_path) == 1
    nosim = write(tmp_path / "n.json", {"symbol": {"family": "brownian"}, "speed": {"family": "exp"}})
    assert run("simulate", "--config", nosim) == 64
    inf = write(tmp_path / "i.json", {"symbol": {"family": "brownian"},
                                      "speed": {"family": "constant"}, "sim": SMALL_SIM})
    assert run("simulate", "--config", inf) == 2


def test_report_errors(tmp_path, analyzed):
    root, _ = analyzed
    assert run("report", "--out", tmp_path) == 64
    good = json.loads((root / "brownian-exp" / "report.json").read_text())
    wrong = write(tmp_path / "v2.json", dict(good, schema_version=2))
    assert run("report", wrong, "--out", tmp_path) == 65
    partial = write(tmp_path / "p.json", {"delta": 1.0})
    assert run("report", partial, "--out", tmp_path) == 65
    (tmp_path / "junk.json").write_text("]]")
    assert run("report", tmp_path / "junk.json", "--out", tmp_path) == 65


def test_report_single_and_tolerance_rows(tmp_path, analyzed):
    root, _ = analyzed
    assert run("report", root / "brownian-exp" / "report.json", "--out", tmp_path / "one") == 0
    with open(tmp_path / "one" / "report_table.csv", newline="") as fh:
        assert len(list(csv.reader(fh))) == 2
    loose = write(tmp_path / "l.json", {"quad": {"rtol": 1e-6, "atol": 1e-8}})
    assert run("analyze", "--preset", "stable-mixture", "--config", loose,
               "--out", tmp_path / "loose") == 0
    assert run("report", root / "stable-mixture" / "report.json", tmp_path / "loose" / "report.json",
               "--out", tmp_path / "two") == 0
    with open(tmp_path / "two" / "report_table.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    assert rows[0]["quad_rtol"] != rows[1]["quad_rtol"]
    assert float(rows[0]["delta"]) == pytest.approx(float(rows[1]["delta"]), rel=1e-5)


def test_console_script_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "levygap.cli", "analyze", "--preset",
                          "brownian-exp", "--out", str(tmp_path)], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert "lambda1_lower=0.3397852286" in out.stdout
