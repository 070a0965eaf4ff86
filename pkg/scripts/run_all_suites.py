"""Run every suite with default settings and write reports/all_suites.json."""

import argparse
import sys
import time
from pathlib import Path

from glnalg.suites import RunConfig, run, write_report

ap = argparse.ArgumentParser()
ap.add_argument("--out", default="reports/all_suites.json")
ap.add_argument("--workers", type=int, default=1)
ap.add_argument("--max-degree", type=int, default=2)
args = ap.parse_args()

t0 = time.perf_counter()
doc = run(RunConfig(workers=args.workers, max_degree=args.max_degree))
write_report(doc, args.out)
for suite in doc["suites"]:
    bad = sum(not r["pass"] for r in suite["records"])
    print(f"{suite['suite']:10s} {'PASS' if suite['pass'] else 'FAIL'}  {len(suite['records'])} records, {bad} failing")
print(f"wrote {Path(args.out)} in {time.perf_counter() - t0:.1f}s")
sys.exit(0 if doc["pass"] else 1)
