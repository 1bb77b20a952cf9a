"""The command-line front end: analyze presets, then merge the reports.

Equivalent shell session:

    levygap analyze --preset brownian-exp --out runs/bexp
    levygap analyze --preset stable-mixture --out runs/mix
    levygap report runs/bexp/report.json runs/mix/report.json --out runs
"""

import csv
import tempfile
from pathlib import Path

from levygap.cli import main
from levygap.config import PRESETS

with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp)
    reports = []
    for name in PRESETS:
        code = main(["analyze", "--preset", name, "--out", str(root / name)])
        print(f"analyze {name:<16} exit {code}")
        reports.append(str(root / name / "report.json"))
    main(["report", *reports, "--out", str(root)])
    with open(root / "report_table.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        print(f"{Path(r['source']).parent.name:<16} lambda1 >= {float(r['lambda1_lower']):.4f}  "
              f"kappa >= {float(r['kappa_lower']):.4f}")
