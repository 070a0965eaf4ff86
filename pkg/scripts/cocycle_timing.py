"""Wall-clock cost of the exact cocycle check against the per-leg degree bound."""

import argparse
import time

from glnalg.hopf import TwistSpec, cocycle_check

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=2)
ap.add_argument("--max-degree", type=int, default=3)
args = ap.parse_args()

print(f"{'variant':8s} {'deg':>3s} {'triples':>8s} {'seconds':>8s}  pass")
for variant in ("F1", "F2"):
    for deg in range(1, args.max_degree + 1):
        t0 = time.perf_counter()
        rep = cocycle_check(args.n, deg, TwistSpec(variant), keep_passing=False)
        dt = time.perf_counter() - t0
        print(f"{variant:8s} {deg:3d} {rep.counts['cocycle'][0]:8d} {dt:8.2f}  {rep.passed}")
