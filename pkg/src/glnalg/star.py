"""Momentum-space composition laws for plane waves.

All maps take complex ``n x n`` arrays.  The ``u -> 0`` limit is structural:
``(e^{A} - I) / u`` is always evaluated as ``k phi1(u k)``, never by division.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

__all__ = [
    "StarParams",
    "SingularBranch",
    "as_momentum",
    "phi1",
    "expm",
    "bigK",
    "bigKinv",
    "bigJ_closed",
    "bigJtilde_closed",
    "bigJ_ode",
    "bigJtilde_ode",
    "batched_J_ode",
    "bigD",
    "bigDtilde",
    "bigD_indirect",
    "bigDtilde_indirect",
    "sample_matrix",
    "case_rng",
    "matrix_to_json",
    "matrix_from_json",
    "StarSuiteResult",
    "star_suite",
]


class SingularBranch(ValueError):
    """``I + u k`` has an eigenvalue on the closed negative real axis."""


@dataclass(frozen=True)
class StarParams:
    u: float
    tol: float = 1e-12
    ode_steps: int = 1000

    def __post_init__(self):
        if not np.isfinite(self.u):
            raise ValueError("u must be finite")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.ode_steps < 1:
            raise ValueError("ode_steps must be >= 1")


def as_momentum(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("momentum matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("momentum matrix has non-finite entries")
    return m


def _norm1(a: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(a), axis=0))) if a.size else 0.0


# Taylor block is used once the 1-norm is at most this
_TAYLOR_RADIUS = 0.5
_TAYLOR_TERMS = 30  # 0.5^30 / 31! is far below double eps


def phi1(a) -> np.ndarray:
    """``sum_m A^m / (m+1)!`` via scaling and squaring.

    Uses ``phi1(2A) = phi1(A) (e^A + I) / 2`` with ``e^A = I + A phi1(A)``.
    """
    a = as_momentum(a)
    n = a.shape[0]
    eye = np.eye(n, dtype=complex)
    norm = _norm1(a)
    s = 0
    if norm > _TAYLOR_RADIUS:
        s = int(np.ceil(np.log2(norm / _TAYLOR_RADIUS)))
    b = a / (2**s)
    # Horner: phi1(B) = I + B/2 (I + B/3 (I + ...))
    out = eye.copy()
    for m in range(_TAYLOR_TERMS, 0, -1):
        out = eye + (b @ out) / (m + 1)
    for _ in range(s):
        e = eye + b @ out
        out = out @ (e + eye) / 2
        b = 2 * b
    return out


def expm(a) -> np.ndarray:
    a = as_momentum(a)
    return np.eye(a.shape[0], dtype=complex) + a @ phi1(a)


def bigK(k, params: StarParams) -> np.ndarray:
    """``(e^{u k} - I) / u``."""
    k = as_momentum(k)
    return k @ phi1(params.u * k)


def _check_branch(m: np.ndarray) -> None:
    ev = np.linalg.eigvals(m)
    scale = max(1.0, float(np.max(np.abs(ev))))
    bad = (np.abs(ev.imag) <= 1e-14 * scale) & (ev.real <= 0)
    if np.any(bad):
        raise SingularBranch(f"I + u k has eigenvalue {ev[bad][0]} on the closed negative real axis")


def _log_series(b: np.ndarray, terms: int = 60) -> np.ndarray:
    """``sum_m (-B)^m / (m+1)`` so that ``ln(I + B) = B @ result``; 1-norm of B <= 1/2."""
    n = b.shape[0]
    eye = np.eye(n, dtype=complex)
    out = eye / (terms + 1)
    for m in range(terms - 1, -1, -1):
        out = eye / (m + 1) - b @ out
    return out


def bigKinv(k, params: StarParams) -> np.ndarray:
    """``ln(I + u k) / u``, principal branch.

    Mercator series when ``|u k|_1 <= 1/2``; otherwise inverse scaling and
    squaring with principal square roots before the series.
    """
    k = as_momentum(k)
    u = params.u
    if u == 0:
        return k.copy()
    n = k.shape[0]
    eye = np.eye(n, dtype=complex)
    uk = u * k
    _check_branch(eye + uk)
    if _norm1(uk) <= _TAYLOR_RADIUS:
        return k @ _log_series(uk)
    m = eye + uk
    s = 0
    while _norm1(m - eye) > _TAYLOR_RADIUS / 2:
        m = scipy.linalg.sqrtm(m)
        s += 1
        if s > 60:
            raise SingularBranch("square-root iteration did not converge")
    b = m - eye
    return (2**s) * (b @ _log_series(b)) / u


def bigJ_closed(t: float, k, q, params: StarParams) -> np.ndarray:
    """``(e^{u t k} - I)/u + e^{u t k} q``."""
    k, q = as_momentum(k), as_momentum(q)
    tk = t * k
    ph = phi1(params.u * tk)
    e = np.eye(k.shape[0], dtype=complex) + params.u * tk @ ph
    return tk @ ph + e @ q


def bigJtilde_closed(t: float, k, q, params: StarParams) -> np.ndarray:
    """``(e^{u t k} - I)/u + q e^{u t k}``."""
    k, q = as_momentum(k), as_momentum(q)
    tk = t * k
    ph = phi1(params.u * tk)
    e = np.eye(k.shape[0], dtype=complex) + params.u * tk @ ph
    return tk @ ph + q @ e


def _rk4(rhs: Callable[[np.ndarray], np.ndarray], y0: np.ndarray, t, steps: int) -> np.ndarray:
    """Fixed-step RK4; ``t`` may be an array broadcasting against a stack ``y0``."""
    y = y0.copy()
    if np.all(np.asarray(t) == 0):
        return y
    h = np.asarray(t, dtype=float) / steps
    for _ in range(steps):
        k1 = rhs(y)
        k2 = rhs(y + h / 2 * k1)
        k3 = rhs(y + h / 2 * k2)
        k4 = rhs(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def bigJ_ode(t: float, k, q, params: StarParams) -> np.ndarray:
    """RK4 for ``dJ/dt = k (I + u J)``, ``J(0) = q``."""
    k, q = as_momentum(k), as_momentum(q)
    eye = np.eye(k.shape[0], dtype=complex)
    u = params.u
    return _rk4(lambda j: k @ (eye + u * j), q, t, params.ode_steps)


def bigJtilde_ode(t: float, k, q, params: StarParams) -> np.ndarray:
    """RK4 for ``dJ/dt = (I + u J) k``, ``J(0) = q``."""
    k, q = as_momentum(k), as_momentum(q)
    eye = np.eye(k.shape[0], dtype=complex)
    u = params.u
    return _rk4(lambda j: (eye + u * j) @ k, q, t, params.ode_steps)


def batched_J_ode(t, k, q, params: StarParams, dual: bool = False) -> np.ndarray:
    """RK4 on stacks ``k, q`` of shape ``(S, n, n)``; ``t`` is a scalar or has shape ``(S,)``."""
    k, q = np.asarray(k, dtype=complex), np.asarray(q, dtype=complex)
    eye = np.eye(k.shape[-1], dtype=complex)
    u = params.u
    rhs = (lambda j: (eye + u * j) @ k) if dual else (lambda j: k @ (eye + u * j))
    ts = np.broadcast_to(np.asarray(t, dtype=float), k.shape[:1])
    return _rk4(rhs, q, ts[:, None, None], params.ode_steps)


def bigD(k, q, params: StarParams) -> np.ndarray:
    k, q = as_momentum(k), as_momentum(q)
    return k + q + params.u * (k @ q)


def bigDtilde(k, q, params: StarParams) -> np.ndarray:
    k, q = as_momentum(k), as_momentum(q)
    return k + q + params.u * (q @ k)


def bigD_indirect(k, q, params: StarParams) -> np.ndarray:
    """``J(1, K^{-1}(k), q)``; may raise :class:`SingularBranch`."""
    return bigJ_closed(1.0, bigKinv(k, params), q, params)


def bigDtilde_indirect(k, q, params: StarParams) -> np.ndarray:
    return bigJtilde_closed(1.0, bigKinv(k, params), q, params)


# ---- sampling and IO ----


def case_rng(seed: int, case: int) -> np.random.Generator:
    return np.random.default_rng([seed, case])


def sample_matrix(rng: np.random.Generator, n: int, u: float) -> np.ndarray:
    """Real and imaginary parts uniform on [-1, 1], scaled by ``1/(2 n |u| + 1)``."""
    scale = 1.0 / (2 * n * abs(u) + 1)
    return (rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))) * scale


def matrix_to_json(m) -> list:
    """Row-major nested list of ``[re, im]`` pairs."""
    m = as_momentum(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return as_momentum([[complex(re, im) for re, im in row] for row in data])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad matrix document: {exc}") from exc


# ---- randomized suite ----

# relation -> tolerance; "tol" entries follow the suite's configured tolerance
STAR_TOLERANCES = {
    "D-assoc": "tol",
    "Dtilde-assoc": "tol",
    "J-closed-vs-ode": 1e-8,
    "Jtilde-closed-vs-ode": 1e-8,
    "K-inverse": "tol",
    "group-law": 1e-13,
    "D-indirect": 1e-10,
    "Dtilde-indirect": 1e-10,
    "flip-duality": 1e-14,
    "unit-laws": 0.0,
    "u0-continuity": None,
}


@dataclass
class StarSuiteResult:
    n: int
    u: float
    samples: int
    seed: int
    tol: float
    max_residual: dict[str, float] = field(default_factory=dict)
    passed: dict[str, bool] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values()) and not self.errors

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "u": self.u,
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol,
            "tolerances": {k: (self.tol if v == "tol" else v) for k, v in STAR_TOLERANCES.items()},
            "maxResidual": {k: float(v) for k, v in sorted(self.max_residual.items())},
            "pass": {k: bool(v) for k, v in sorted(self.passed.items())},
            "errors": list(self.errors),
        }


def _inf(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def star_suite(
    n: int,
    u: float,
    samples: int = 100,
    seed: int = 0,
    tol: float = 1e-12,
    ode_steps: int = 1000,
    compose: Callable | None = None,
) -> StarSuiteResult:
    """Randomized checks of the composition laws.

    ``compose`` replaces ``bigD`` (used for negative controls).
    """
    params = StarParams(u, tol, ode_steps)
    d = compose or bigD
    res = StarSuiteResult(n, u, samples, seed, tol)
    worst: dict[str, float] = {k: 0.0 for k in STAR_TOLERANCES}
    cont_ok = True
    eye = np.eye(n, dtype=complex)
    zero = np.zeros((n, n), dtype=complex)
    p0 = StarParams(0.0, tol, ode_steps)
    cases = []
    for case in range(samples):
        rng = case_rng(seed, case)
        k, q, r = (sample_matrix(rng, n, u) for _ in range(3))
        cases.append((k, q, r, float(rng.uniform(0, 1))))

    def upd(name, val):
        worst[name] = max(worst[name], val)

    if cases:
        ks = np.stack([c[0] for c in cases])
        qs = np.stack([c[1] for c in cases])
        ts = np.array([c[3] for c in cases])
        j_ode = batched_J_ode(ts, ks, qs, params)
        jt_ode = batched_J_ode(ts, ks, qs, params, dual=True)
    for case, (k, q, r, t) in enumerate(cases):

        upd("D-assoc", _inf(d(d(k, q, params), r, params) - d(k, d(q, r, params), params)))
        upd("Dtilde-assoc", _inf(bigDtilde(bigDtilde(k, q, params), r, params) - bigDtilde(k, bigDtilde(q, r, params), params)))
        upd("J-closed-vs-ode", _inf(bigJ_closed(t, k, q, params) - j_ode[case]))
        upd("Jtilde-closed-vs-ode", _inf(bigJtilde_closed(t, k, q, params) - jt_ode[case]))
        upd("group-law", _inf((eye + u * d(k, q, params)) - (eye + u * k) @ (eye + u * q)))
        upd("flip-duality", _inf(bigDtilde(k, q, params) - d(q, k, params)))
        upd("unit-laws", max(_inf(d(zero, q, params) - q), _inf(d(k, zero, params) - k)))
        try:
            upd("K-inverse", _inf(bigKinv(bigK(k, params), params) - k))
            upd("D-indirect", _inf(d(k, q, params) - bigD_indirect(k, q, params)))
            upd("Dtilde-indirect", _inf(bigDtilde(k, q, params) - bigDtilde_indirect(k, q, params)))
        except SingularBranch as exc:
            res.errors.append(f"case {case}: {exc}")
        # |D(k,q,u) - (k+q)| <= |u| |k| |q| in the induced infinity norm
        bound = abs(u) * np.linalg.norm(k, np.inf) * np.linalg.norm(q, np.inf) * (1 + 1e-12)
        gap = np.linalg.norm(d(k, q, params) - (k + q), np.inf)
        worst["u0-continuity"] = max(worst["u0-continuity"], gap - bound)
        cont_ok = cont_ok and gap <= bound + 1e-15
        cont_ok = cont_ok and _inf(d(k, q, p0) - (k + q)) == 0.0
    for name, val in worst.items():
        lim = STAR_TOLERANCES[name]
        res.max_residual[name] = val
        if name == "u0-continuity":
            res.passed[name] = cont_ok
        elif lim == "tol":
            res.passed[name] = val < tol
        elif lim == 0.0:
            res.passed[name] = val == 0.0
        else:
            res.passed[name] = val < lim
    return res
