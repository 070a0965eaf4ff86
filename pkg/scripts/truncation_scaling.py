"""Numeric error of the truncated primed composition law as u shrinks.

For a spec truncated at order N the mismatch between D' read off from the
truncated coproduct and Lambda(D(Lambda^-1 k, Lambda^-1 q)) should fall like
u^(N+1); the fitted log-log slope is printed for each N.
"""

import numpy as np

from glnalg.general import builtin_specs, prime_composition_numeric

rng = np.random.default_rng(0)
us = np.array([0.04, 0.02, 0.01, 0.005])
for name in ("quadratic-n1", "mixed-n2"):
    for N in (1, 2, 3):
        spec = builtin_specs(N)[name]
        n = spec.n
        k = 0.5 * (rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n)))
        q = 0.5 * (rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n)))
        errs = np.array([prime_composition_numeric(spec, k, q, u) for u in us])
        slope = np.polyfit(np.log(us), np.log(errs), 1)[0]
        cells = "  ".join(f"{e:.2e}" for e in errs)
        print(f"{name:13s} N={N}  errors {cells}  slope {slope:.2f} (expected {N + 1})")
