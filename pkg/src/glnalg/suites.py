"""Named verification suites, their negative controls, and the check catalogue."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable

from . import __version__
from .report import VerificationReport

SCHEMA_VERSION = 1

EXACT_SUITES = ("gln", "duality", "coproduct", "twist", "cocycle", "general", "family")
NUMERIC_SUITES = ("star",)
ALL_SUITES = ("gln", "duality", "star", "coproduct", "twist", "cocycle", "general", "family")

# id -> (anchor, formula)
CATALOG: dict[str, tuple[str, str]] = {
    "gln-bracket": (
        "gl(n) bracket of the first and second linear realizations",
        "[X_mn, X_lr] = i u (d_mr X_ln - d_ln X_mr)",
    ),
    "dual-gln-bracket": (
        "dual gl(n) bracket of the dual realizations",
        "[Y_mn, Y_lr] = -i u (d_mr Y_ln - d_ln Y_mr)",
    ),
    "phi-factorization": ("generators factor through the phi-tensor", "X_mn = x_ab phi_ab,mn(p)"),
    "second-literal": ("second realization equals its term-by-term formula", "X_mn = x_mn - u x_an p_am"),
    "ZL-relations": (
        "Z and L relations",
        "[Z_mn, xhat_lr] = -iu d_ml Z_rn; [Z_mn, yhat_lr] = -iu d_rn Z_ml; [L,L] = i(...); [L~,L~] = -i(...)",
    ),
    "xhat-yhat-commute": ("the realization and its dual commute", "[xhat_mn, yhat_lr] = 0"),
    "yhat(-u)-realization": (
        "the dual at u -> -u realizes the original bracket and differs from xhat",
        "[yhat(-u)_mn, yhat(-u)_lr] = iu(...), yhat(-u) != xhat",
    ),
    "D-assoc": ("associativity of the star product on plane waves", "D(D(k,q),r) = D(k,D(q,r)), D = k + q + u k q"),
    "Dtilde-assoc": ("associativity of the dual star product", "D~(D~(k,q),r) = D~(k,D~(q,r)), D~ = k + q + u q k"),
    "J-closed-vs-ode": (
        "closed-form solution of the plane-wave flow against RK4",
        "J(t) = (e^{utk} - I)/u + e^{utk} q solves dJ/dt = k(I + uJ), J(0) = q",
    ),
    "Jtilde-closed-vs-ode": (
        "dual plane-wave flow against RK4",
        "J~(t) = (e^{utk} - I)/u + q e^{utk} solves dJ/dt = (I + uJ)k",
    ),
    "K-inverse": ("K and its inverse", "K^-1(K(k)) = k, K = (e^{uk} - I)/u, K^-1 = ln(I + uk)/u"),
    "group-law": ("multiplicativity of Z on plane waves", "I + u D(k,q) = (I + uk)(I + uq)"),
    "D-indirect": ("composition law from the flow", "D(k,q) = J(1, K^-1(k), q)"),
    "Dtilde-indirect": ("dual composition law from the dual flow", "D~(k,q) = J~(1, K^-1(k), q)"),
    "flip-duality": ("the two composition laws are mirror images", "D~(k,q) = D(q,k); D~p = flip(Dp)"),
    "unit-laws": ("plane-wave units", "D(0,q) = q, D(k,0) = k"),
    "u0-continuity": ("undeformed limit", "|D(k,q,u) - (k+q)| <= |u| |k| |q|"),
    "coassoc": ("coassociativity of the momentum coproducts", "(D (x) 1) D p = (1 (x) D) D p"),
    "DeltaZ": ("Z is group-like", "D Z_mn = Z_ma (x) Z_an"),
    "twist-realization": (
        "the twist generates the realization",
        "m F1^-1 (|> (x) 1)(x_mn (x) 1) = xhat_mn, m F2^-1 (|> (x) 1)(x_mn (x) 1) = yhat_mn",
    ),
    "twisted-coproduct": ("the twist conjugates the primitive coproduct", "F D0(p) F^-1 = D p"),
    "normal-ordered": (
        "normal-ordered and closed forms of the twist agree",
        ":exp(i (1 (x) x_ab)(D - D0) p_ab): = exp(i (ln Z)_mn (x) L_mn)",
    ),
    "cocycle": ("Drinfeld cocycle condition", "(1 (x) F)(1 (x) D0)F = (F (x) 1)(D0 (x) 1)F"),
    "factorization": (
        "factorization of the coproduct of the twist",
        "(1 (x) D0)F = F12 F13 = F13 F12; both cocycle sides equal F23 F13 F12",
    ),
    "automorphism": ("the similarity map preserves brackets", "Ad_G [a, b] = [Ad_G a, Ad_G b]"),
    "lambda-roundtrip": ("momentum map and its series inverse", "Lambda(Lambda^-1(p)) = p = Lambda^-1(Lambda(p))"),
    "primed-realization": (
        "realizations rewritten in the primed frame",
        "xhat = x' phi'(p') + chi'(p'); brackets and [xhat, yhat] = 0 preserved",
    ),
    "prime-coassoc": ("coassociativity of the transformed coproduct", "D p' = Lambda(D p)|_{p = Lambda^-1(p')}"),
    "consistency": (
        "realization recovered from the transformed coproduct",
        "xhat = x' + i x'_ab m((D - D0) p'_ab (|> (x) 1)(x'_mn (x) 1)) + chi'",
    ),
    "twist-family": (
        "one-parameter family of twists",
        "m :exp(i((1-s)(1 (x) x') + s(x' (x) 1))(D - D0)p'): (|> (x) |>) is independent of s; F1(s) = flip F2(1-s)",
    ),
}

# relation name (as recorded by the verifiers) -> catalogue id
RELATION_IDS = {
    "gln-bracket": "gln-bracket",
    "dual-gln-bracket": "dual-gln-bracket",
    "phi-factorization": "phi-factorization",
    "second-literal": "second-literal",
    "[Z,xhat]": "ZL-relations",
    "[Z,yhat]": "ZL-relations",
    "[L,L]": "ZL-relations",
    "[Lt,Lt]": "ZL-relations",
    "xhat-yhat-commute": "xhat-yhat-commute",
    "yhat(-u)-gln-bracket": "yhat(-u)-realization",
    "yhat(-u)-differs-from-xhat": "yhat(-u)-realization",
    "coassociativity": "coassoc",
    "DeltaZ-multiplicative": "DeltaZ",
    "DeltaTildeZ-multiplicative": "DeltaZ",
    "flip-duality": "flip-duality",
    "m F^-1 (x (x) 1) = realization": "twist-realization",
    "F D0(p) F^-1 = D(p)": "twisted-coproduct",
    ":exp: = closed form": "normal-ordered",
    "displayed exponent = derived exponent": "normal-ordered",
    "m :exp: (x (x) 1) = realization": "normal-ordered",
    "cocycle": "cocycle",
    "(1xD0)F = F12 F13": "factorization",
    "(1xD0)F = F13 F12": "factorization",
    "cocycle side = F23 F13 F12": "factorization",
    "Ad[a,b] = [Ad a, Ad b]": "automorphism",
    "Lambda o Lambda^-1 = id": "lambda-roundtrip",
    "Lambda^-1 o Lambda = id": "lambda-roundtrip",
    "xhat roundtrip": "primed-realization",
    "yhat roundtrip": "primed-realization",
    "primed gl(n)": "primed-realization",
    "primed dual gl(n)": "primed-realization",
    "primed xhat-yhat commute": "primed-realization",
    "coassociativity[delta']": "prime-coassoc",
    "coassociativity[deltaTilde']": "prime-coassoc",
    "consistency[xhat]": "consistency",
    "consistency[yhat]": "consistency",
    "star product independent of s": "twist-family",
    "F1(s) = flip F2(1-s)": "twist-family",
    "f *1 g = g *2 f": "twist-family",
    "m F1(s)^-1 (x' (x) 1) = xhat": "twist-family",
    "s=0 reproduces closed-form F1": "twist-family",
}

MUTATIONS = {
    "gln": "u-term of xhat_12 deleted (xhat_11 when n = 1)",
    "duality": "u-term of yhat_11 deleted",
    "star": "composition law replaced by k + q + u k q^T",
    "coproduct": "u-term of D p_mn uses p_ma (x) p_na",
    "twist": "sign of the u^2/2 coefficient of the logarithm flipped",
    "cocycle": "sign of the u^2/2 coefficient of the logarithm flipped",
    "general": "u-term of the first entry of Lambda^-1 dropped",
    "family": "sign of the s (x' (x) 1) part of the exponent flipped",
}


def explain(check_id: str) -> str:
    if check_id not in CATALOG:
        raise KeyError(f"unknown check {check_id!r}")
    anchor, formula = CATALOG[check_id]
    return f"{check_id}: {anchor}\n  {formula}"


class ConfigError(ValueError):
    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


@dataclass
class RunConfig:
    """``n = None`` picks 2 for exact suites and 3 for the star suite."""

    n: int | None = None
    u: float = 0.3
    symbolic_u: bool = True
    seed: int = 0
    tol: float = 1e-12
    samples: int = 100
    max_degree: int = 2
    order: int = 3
    suites: list[str] = field(default_factory=lambda: list(ALL_SUITES))
    out: str | None = None
    workers: int = 1
    timings: bool = False
    mutate: bool = False
    spec_files: list[str] = field(default_factory=list)

    def validate(self) -> RunConfig:
        def bad(name, why):
            raise ConfigError(f"field '{name}': {why}", name)

        if self.n is not None and not (isinstance(self.n, int) and 1 <= self.n <= 6):
            bad("n", "must be an integer in 1..6")
        if not (isinstance(self.tol, (int, float)) and self.tol > 0 and math.isfinite(self.tol)):
            bad("tol", "must be a positive finite number")
        if not (isinstance(self.u, (int, float)) and math.isfinite(self.u)):
            bad("u", "must be a finite real number")
        if not (isinstance(self.max_degree, int) and 0 <= self.max_degree <= 4):
            bad("max_degree", "must be an integer in 0..4")
        if not (isinstance(self.order, int) and 1 <= self.order <= 6):
            bad("order", "must be an integer in 1..6")
        if not (isinstance(self.samples, int) and self.samples >= 1):
            bad("samples", "must be a positive integer")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            bad("seed", "must be a 64-bit non-negative integer")
        if not (isinstance(self.workers, int) and self.workers >= 1):
            bad("workers", "must be a positive integer")
        if not self.symbolic_u:
            bad("symbolic_u", "exact suites always run over symbolic u")
        unknown = [s for s in self.suites if s not in ALL_SUITES]
        if unknown or not self.suites:
            bad("suites", f"unknown suite(s) {unknown}; choose from {', '.join(ALL_SUITES)}")
        return self

    @classmethod
    def from_json(cls, text: str, source: str = "<config>") -> RunConfig:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"{source}: top level must be an object")
        known = {f.name for f in fields(cls)}
        aliases = {"maxDegree": "max_degree", "specFiles": "spec_files", "symbolicU": "symbolic_u"}
        kw = {}
        for k, v in doc.items():
            name = aliases.get(k, k)
            if name not in known:
                raise ConfigError(f"{source}: unknown field '{k}'")
            kw[name] = v
        if isinstance(kw.get("suites"), str):
            kw["suites"] = [s for s in kw["suites"].split(",") if s]
        return cls(**kw)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("workers")
        return d


# ---------------------------------------------------------------- records


def _records_from_report(rep: VerificationReport, out: list, elapsed: float | None) -> None:
    """Collapse a report into one record per relation."""
    first_fail = {}
    for r in rep.records:
        if not r.passed and r.relation not in first_fail:
            first_fail[r.relation] = r
    for rel, (ok, badn) in sorted(rep.counts.items()):
        cid = RELATION_IDS.get(rel, rel)
        rec = {
            "id": cid,
            "check": f"{rep.name}/{rel}",
            "anchor": CATALOG.get(cid, (rel, ""))[0],
            "pass": badn == 0 and ok > 0,
            "counts": {"pass": ok, "fail": badn},
            "residual": "0",
        }
        if rel in first_fail:
            f = first_fail[rel]
            rec["residual"] = f.residual
            rec["firstFailure"] = f.indices
        if elapsed is not None:
            rec["elapsed"] = round(elapsed, 6)
        out.append(rec)


def _exact_n(cfg: RunConfig) -> int:
    return cfg.n if cfg.n is not None else 2


# ---------------------------------------------------------------- suites


def suite_gln(cfg: RunConfig) -> tuple[list[VerificationReport], dict]:
    from .realizations import (
        RealizationSet,
        build_realization,
        second_from_literal,
        verify_gln,
        verify_ZL_relations,
    )

    n = _exact_n(cfg)
    reps = []
    for variant in ("first", "second", "dualOfFirst", "dualOfSecond"):
        r = build_realization(n, variant)
        if cfg.mutate and variant == "first":
            mn = (1, 2) if n > 1 else (1, 1)
            gens = dict(r.generators)
            gens[mn] = gens[mn].u_part(0)
            r = RealizationSet(n, variant, r.u, gens, r.phi)
        rep = verify_gln(r, keep_passing=False)
        for mn, res in sorted(r.phi_residuals().items()):
            rep.add("phi-factorization", mn, res)
        reps.append(rep)
    lit = second_from_literal(n)
    sec = build_realization(n, "second")
    rep = VerificationReport("second-literal", keep_passing=False)
    for mn in sorted(lit):
        rep.add("second-literal", mn, lit[mn] - sec[mn])
    reps.append(rep)
    reps.append(verify_ZL_relations(n, keep_passing=False))
    return reps, {"n": n}


def suite_duality(cfg: RunConfig):
    from .realizations import RealizationSet, build_realization, verify_duality

    n = _exact_n(cfg)
    yhat = None
    if cfg.mutate:
        y = build_realization(n, "dualOfFirst")
        gens = dict(y.generators)
        gens[(1, 1)] = gens[(1, 1)].u_part(0)
        yhat = RealizationSet(n, "dualOfFirst", y.u, gens, y.phi)
    return [verify_duality(n, keep_passing=False, yhat=yhat)], {"n": n}


def suite_coproduct(cfg: RunConfig):
    from .hopf import coassoc_check, coproduct_identities_check, log_primitivity_check

    n = _exact_n(cfg)
    reps = [coassoc_check(v, n, mutate=cfg.mutate and v == "delta", keep_passing=False) for v in ("zero", "delta", "deltaTilde")]
    reps.append(coproduct_identities_check(n, keep_passing=False))
    lp = log_primitivity_check(n, order=cfg.order, keep_passing=False)
    diag = {
        "lnZ_primitive_through_order": cfg.order,
        "lnZ_primitive": lp.passed,
        "lnZ_note": "ln(Z (x) 1 . 1 (x) Z) splits only when the two matrix factors commute (n = 1)",
    }
    return reps, {"n": n, "diagnostics": diag}


BASIS_NOTE = (
    "identities checked by action on every coordinate monomial with per-leg degree <= max_degree; "
    "a differential operator of order <= max_degree per leg is fixed by this basis"
)


def suite_twist(cfg: RunConfig):
    from .hopf import TwistSpec, normal_ordered_twist_check, twist_realization_check, twisted_coproduct_check

    n = _exact_n(cfg)
    reps = []
    for v in ("F1", "F2"):
        spec = TwistSpec(v, mutate=cfg.mutate)
        reps.append(twist_realization_check(n, spec, keep_passing=False))
        reps.append(twisted_coproduct_check(n, cfg.max_degree, spec, keep_passing=False))
        reps.append(twisted_coproduct_check(n, cfg.max_degree, spec, flipped=True, keep_passing=False))
        reps.append(normal_ordered_twist_check(n, cfg.max_degree, spec, keep_passing=False))
    return reps, {"n": n, "max_degree": cfg.max_degree, "basis": BASIS_NOTE}


def suite_cocycle(cfg: RunConfig):
    from .hopf import TwistSpec, cocycle_check

    n = _exact_n(cfg)
    reps = [cocycle_check(n, cfg.max_degree, TwistSpec(v, mutate=cfg.mutate), keep_passing=False) for v in ("F1", "F2")]
    diag = {r.name: {"F13F23_equals_F23F13": r.meta.get("F13F23_equals_F23F13")} for r in reps}
    return reps, {"n": n, "max_degree": cfg.max_degree, "basis": BASIS_NOTE, "diagnostics": diag}


def _specs(cfg: RunConfig):
    from .general import SimilaritySpec, builtin_specs

    specs = [s for s in builtin_specs(cfg.order).values() if cfg.n is None or s.n <= cfg.n]
    for path in cfg.spec_files:
        specs.append(SimilaritySpec.load(path))
    return specs


def suite_general(cfg: RunConfig):
    from .general import (
        automorphism_check,
        consistency_check,
        lambda_roundtrip_check,
        primed_bracket_check,
        prime_coassoc_check,
    )

    reps = []
    pre = {}
    for sp in _specs(cfg):
        for rep in (
            automorphism_check(sp, False),
            lambda_roundtrip_check(sp, mutate=cfg.mutate, keep_passing=False),
            primed_bracket_check(sp, False),
            prime_coassoc_check(sp, False),
            consistency_check(sp, False),
        ):
            rep.name = f"{rep.name}[{sp.label}]"
            reps.append(rep)
        pre[sp.label] = reps[-1].meta["precondition_S_p_degree_ge_2"]
    return reps, {"order": cfg.order, "verified": f"to O(u^{cfg.order})", "specs": sorted(pre), "S_p_degree_ge_2": pre}


def suite_family(cfg: RunConfig):
    from fractions import Fraction

    from .general import twist_family_check

    reps = []
    lit = {}
    for sp in _specs(cfg):
        if not sp.T.is_zero():
            continue
        rep = twist_family_check(sp, (0, Fraction(1, 2), 1), max_deg=min(cfg.max_degree, 2), mutate=cfg.mutate, keep_passing=False)
        rep.name = f"{rep.name}[{sp.label}]"
        lit[sp.label] = rep.meta["literal_F2_display_changes_star_product"]
        reps.append(rep)
    return reps, {"order": cfg.order, "verified": f"to O(u^{cfg.order})", "s_values": ["0", "1/2", "1"], "diagnostics": {"literal_display_changes_star_product": lit}}


def run_star(cfg: RunConfig) -> dict:
    from .star import bigD, star_suite

    n = cfg.n if cfg.n is not None else 3
    compose = None
    if cfg.mutate:
        compose = lambda k, q, params: k + q + params.u * (k @ q.T)  # noqa: E731
    t0 = time.perf_counter()
    res = star_suite(n, cfg.u, cfg.samples, cfg.seed, cfg.tol, compose=compose or bigD)
    elapsed = time.perf_counter() - t0
    records = []
    for rel, val in sorted(res.max_residual.items()):
        rec = {
            "id": rel,
            "check": f"star/{rel}",
            "anchor": CATALOG[rel][0],
            "pass": bool(res.passed[rel]),
            "residual": f"{val:.3e}",
        }
        if cfg.timings:
            rec["elapsed"] = round(elapsed, 6)
        records.append(rec)
    if res.errors:
        records.append({"id": "K-inverse", "check": "star/branch", "anchor": CATALOG["K-inverse"][0], "pass": False, "residual": "; ".join(res.errors[:5])})
    return {"suite": "star", "pass": all(r["pass"] for r in records), "records": records, "meta": res.to_dict()}


SUITE_FUNCS: dict[str, Callable] = {
    "gln": suite_gln,
    "duality": suite_duality,
    "coproduct": suite_coproduct,
    "twist": suite_twist,
    "cocycle": suite_cocycle,
    "general": suite_general,
    "family": suite_family,
}


def run_suite(name: str, cfg: RunConfig) -> dict:
    if name == "star":
        out = run_star(cfg)
    else:
        t0 = time.perf_counter()
        reps, meta = SUITE_FUNCS[name](cfg)
        records: list = []
        for rep in reps:
            _records_from_report(rep, records, None)
        elapsed = time.perf_counter() - t0
        if cfg.timings:
            meta["elapsed"] = round(elapsed, 6)
        out = {"suite": name, "pass": all(r["pass"] for r in records), "records": records, "meta": meta}
    if cfg.mutate:
        out["mutation"] = MUTATIONS[name]
    return out


def _run_one(args):
    name, cfg_dict = args
    return run_suite(name, RunConfig(**cfg_dict))


def run(cfg: RunConfig) -> dict:
    """Run the configured suites; results are ordered as requested."""
    cfg.validate()
    names = list(dict.fromkeys(cfg.suites))
    if cfg.workers > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            results = list(ex.map(_run_one, [(nm, asdict(cfg)) for nm in names]))
    else:
        results = [run_suite(nm, cfg) for nm in names]
    import numpy

    return {
        "schemaVersion": SCHEMA_VERSION,
        "tool": {"name": "glnalg", "version": __version__, "numpy": numpy.__version__},
        "config": cfg.echo(),
        "pass": all(r["pass"] for r in results),
        "suites": results,
    }


def write_report(doc: dict, path: str) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    import os
    import tempfile

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(doc))
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
