"""Acceptance criteria 1 to 11, each at its stated tolerance.

Every test stores a one-line verdict in ``VERDICTS``; the terminal summary
hook in conftest prints them in order after the run.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from glnalg.cli import main
from glnalg.general import (
    automorphism_check,
    builtin_specs,
    consistency_check,
    lambda_roundtrip_check,
    twist_family_check,
)
from glnalg.hopf import TwistSpec, coassoc_check, cocycle_check, twist_realization_check, twisted_coproduct_check
from glnalg.realizations import build_realization, verify_duality, verify_gln
from glnalg.star import (
    StarParams,
    batched_J_ode,
    bigD,
    bigDtilde,
    bigJ_closed,
    bigK,
    bigKinv,
    case_rng,
    sample_matrix,
)
from glnalg.suites import ALL_SUITES

VERDICTS: dict[int, str] = {}
SAMPLES = 100
SEED = 0


def record(num: int, ok: bool, detail: str) -> None:
    VERDICTS[num] = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, VERDICTS[num]


def samples(n: int, u: float, count: int = 3):
    """The shared seeded sample set: ``count`` matrices per case."""
    out = []
    for case in range(SAMPLES):
        rng = case_rng(SEED, case)
        out.append([sample_matrix(rng, n, u) for _ in range(count)])
    return out


def inf(a) -> float:
    return float(np.max(np.abs(a)))


def test_criterion_01_gln_relations():
    ok, worst_t, total = True, 0.0, 0
    for n in (1, 2, 3):
        for variant in ("first", "second"):
            t0 = time.perf_counter()
            rep = verify_gln(build_realization(n, variant), keep_passing=False)
            dt = time.perf_counter() - t0
            ok &= rep.passed and rep.counts["gln-bracket"] == [n**4, 0]
            total += rep.counts["gln-bracket"][0]
            if n == 3:
                worst_t = max(worst_t, dt)
    ok &= worst_t < 10
    record(1, ok, f"{total} bracket residuals exactly 0, slowest n=3 variant {worst_t:.2f}s (< 10s)")


def test_criterion_02_duality():
    ok, total = True, 0
    for n in (1, 2, 3):
        rep = verify_duality(n, keep_passing=False)
        ok &= rep.relation_passed("xhat-yhat-commute")
        total += rep.counts["xhat-yhat-commute"][0]
    record(2, ok, f"[xhat, yhat] = 0 exactly on {total} index quadruples, n <= 3")


def test_criterion_03_associativity():
    n, u = 4, 0.3
    pr = StarParams(u)
    wd = wdt = 0.0
    for k, q, r in samples(n, u):
        wd = max(wd, inf(bigD(bigD(k, q, pr), r, pr) - bigD(k, bigD(q, r, pr), pr)))
        wdt = max(wdt, inf(bigDtilde(bigDtilde(k, q, pr), r, pr) - bigDtilde(k, bigDtilde(q, r, pr), pr)))
    record(3, wd < 1e-12 and wdt < 1e-12, f"max assoc residual D {wd:.2e}, Dtilde {wdt:.2e} (< 1e-12)")


def test_criterion_04_closed_form_vs_rk4():
    worst, worst_norm = 0.0, 0.0
    for n in (1, 2, 3, 4):
        for u in (0.3, 1.0):
            pr = StarParams(u, ode_steps=1000)
            cases = samples(n, u, 2)
            ks = np.stack([c[0] for c in cases])
            qs = np.stack([c[1] for c in cases])
            ode = batched_J_ode(1.0, ks, qs, pr)
            for i, (k, q) in enumerate(cases):
                worst_norm = max(worst_norm, np.linalg.norm(u * k, np.inf))
                worst = max(worst, inf(bigJ_closed(1.0, k, q, pr) - ode[i]))
    ok = worst < 1e-8 and worst_norm <= 1
    record(4, ok, f"max |J_closed - J_RK4| {worst:.2e} (< 1e-8), 1000 steps, n <= 4, max |uk| {worst_norm:.2f}")


def test_criterion_05_inverse_law():
    n, u = 4, 0.3
    pr = StarParams(u)
    worst = max(inf(bigKinv(bigK(k, pr), pr) - k) for k, _, _ in samples(n, u))
    record(5, worst < 1e-12, f"max |K^-1(K(k)) - k| {worst:.2e} (< 1e-12)")


def test_criterion_06_group_law():
    n, u = 4, 0.3
    pr = StarParams(u)
    eye = np.eye(n)
    worst = max(inf(eye + u * bigD(k, q, pr) - (eye + u * k) @ (eye + u * q)) for k, q, _ in samples(n, u))
    record(6, worst < 1e-13, f"max group-law residual {worst:.2e} (< 1e-13)")


def test_criterion_07_coassociativity():
    ok, total = True, 0
    for n in (1, 2, 3):
        for variant in ("delta", "deltaTilde"):
            rep = coassoc_check(variant, n, keep_passing=False)
            ok &= rep.passed
            total += rep.counts["coassociativity"][0]
    record(7, ok, f"{total} coassociativity residuals exactly 0 for both coproducts, n <= 3")


def test_criterion_08_twist_consistency():
    ok, pairs = True, 0
    for variant in ("F1", "F2"):
        for n in (1, 2, 3):
            ok &= twist_realization_check(n, TwistSpec(variant), keep_passing=False).passed
        for n in (1, 2):
            rep = twisted_coproduct_check(n, 3, TwistSpec(variant), keep_passing=False)
            ok &= rep.passed
            pairs += sum(v[0] for v in rep.counts.values())
    record(8, ok, f"twist reproduces xhat and yhat for n <= 3; twisted coproduct exact on {pairs} pair checks, degree <= 3, n <= 2")


@pytest.mark.slow
def test_criterion_09_cocycle():
    ok, triples, slowest = True, 0, 0.0
    for variant in ("F1", "F2"):
        for n in (1, 2):
            t0 = time.perf_counter()
            rep = cocycle_check(n, 3, TwistSpec(variant), keep_passing=False)
            slowest = max(slowest, time.perf_counter() - t0)
            for rel in ("cocycle", "(1xD0)F = F12 F13", "(1xD0)F = F13 F12"):
                ok &= rep.relation_passed(rel)
            triples += rep.counts["cocycle"][0]
    ok &= slowest < 120
    record(9, ok, f"cocycle and F12 F13 = F13 F12 exact on {triples} triples, degree <= 3, n <= 2; slowest run {slowest:.1f}s (< 120s)")


def test_criterion_10_general_realization():
    specs = builtin_specs(3)
    non_identity = [s for s in specs.values() if not s.is_identity()]
    ok = len(non_identity) >= 3 and any(s.is_identity() for s in specs.values())
    family = 0
    for s in specs.values():
        ok &= s.n <= 2 and s.order <= 3
        ok &= automorphism_check(s, False).passed
        ok &= lambda_roundtrip_check(s, keep_passing=False).passed
        ok &= consistency_check(s, False).passed
        if s.T.is_zero():
            rep = twist_family_check(s, (0, Fraction(1, 2), 1), max_deg=2, keep_passing=False)
            ok &= rep.relation_passed("star product independent of s")
            ok &= rep.relation_passed("F1(s) = flip F2(1-s)")
            ok &= rep.passed
            family += 1
    record(10, ok, f"{len(specs)} specs ({len(non_identity)} non-identity) pass automorphism, Lambda round trip, consistency to O(u^3); s-family on {family}")


def test_criterion_11_negative_controls(capsys):
    codes = {}
    for suite in ALL_SUITES:
        argv = ["verify", suite, "--mutate"]
        if suite == "star":
            argv += ["--samples", "20"]
        codes[suite] = main(argv)
    capsys.readouterr()
    ok = all(c == 1 for c in codes.values())
    record(11, ok, "every suite exits 1 under its mutation: " + ", ".join(f"{s}={c}" for s, c in codes.items()))
