"""Linear realizations of gl(n) inside the matrix Heisenberg algebra and the
exact checks of their bracket relations."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Literal

from .report import VerificationReport
from .ring import I, U, UPoly
from .weyl import WeylElement, commutator, one, p, x

__all__ = [
    "RealizationSet",
    "build_realization",
    "structure_constants",
    "bracket_rhs",
    "verify_gln",
    "verify_duality",
    "verify_ZL_relations",
    "Z",
    "L",
    "Ltilde",
]

Variant = Literal["first", "second", "dualOfFirst", "dualOfSecond"]
VARIANTS: tuple[Variant, ...] = ("first", "second", "dualOfFirst", "dualOfSecond")

# +1: [X_mn, X_lr] = +iu(...); -1: the dual bracket with u -> -u
BRACKET_SIGN = {"first": 1, "second": 1, "dualOfFirst": -1, "dualOfSecond": -1}


def _idx(n: int):
    return range(1, n + 1)


@dataclass
class RealizationSet:
    n: int
    variant: Variant
    u: UPoly
    generators: dict[tuple[int, int], WeylElement]
    phi: dict[tuple[int, int, int, int], WeylElement]

    @property
    def bracket_sign(self) -> int:
        return BRACKET_SIGN[self.variant]

    def __getitem__(self, mn: tuple[int, int]) -> WeylElement:
        return self.generators[mn]

    def with_u(self, u) -> RealizationSet:
        """The same variant with the deformation parameter replaced by ``u``."""
        return build_realization(self.n, self.variant, u)

    def phi_residuals(self) -> dict[tuple[int, int], WeylElement]:
        """``generator - sum x_ab phi_ab,mn`` for every generator; all zero."""
        n = self.n
        out = {}
        for mu, nu in product(_idx(n), repeat=2):
            rebuilt = WeylElement(n)
            for a, b in product(_idx(n), repeat=2):
                rebuilt = rebuilt + x(n, a, b) * self.phi[(a, b, mu, nu)]
            out[(mu, nu)] = self.generators[(mu, nu)] - rebuilt
        return out


def _phi_first(n, a, b, mu, nu, u):
    # delta_am delta_bn + u delta_am p_nb
    out = WeylElement(n)
    if a == mu and b == nu:
        out = out + one(n)
    if a == mu:
        out = out + p(n, nu, b) * u
    return out


def _phi_dual(n, a, b, mu, nu, u):
    # delta_am delta_bn + u delta_bn p_am
    out = WeylElement(n)
    if a == mu and b == nu:
        out = out + one(n)
    if b == nu:
        out = out + p(n, a, mu) * u
    return out


def build_realization(n: int, variant: Variant = "first", u=U) -> RealizationSet:
    """Generators and phi-tensor of a linear realization.

    ``first``:        x_mn + u x_ma p_na
    ``dualOfFirst``:  x_mn + u x_an p_am   (closes the bracket with u -> -u)
    ``second``:       x_mn - u x_an p_am   (dualOfFirst at -u)
    ``dualOfSecond``: x_mn - u x_ma p_na   (first at -u)

    ``u`` may be the symbolic ``U`` (default), ``0``, ``-U`` or any ``UPoly``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    u = UPoly.coerce(u)
    param = -u if variant in ("second", "dualOfSecond") else u
    phi_fn = _phi_first if variant in ("first", "dualOfSecond") else _phi_dual
    phi = {}
    for a, b, mu, nu in product(_idx(n), repeat=4):
        phi[(a, b, mu, nu)] = phi_fn(n, a, b, mu, nu, param)
    gens = {}
    for mu, nu in product(_idx(n), repeat=2):
        g = x(n, mu, nu)
        for al in _idx(n):
            if phi_fn is _phi_first:
                g = g + x(n, mu, al) * p(n, nu, al) * param
            else:
                g = g + x(n, al, nu) * p(n, al, mu) * param
        gens[(mu, nu)] = g
    return RealizationSet(n, variant, u, gens, phi)


def second_from_literal(n: int, u=U) -> dict[tuple[int, int], WeylElement]:
    """The second realization written out term by term: x_mn - u x_an p_am."""
    u = UPoly.coerce(u)
    out = {}
    for mu, nu in product(_idx(n), repeat=2):
        g = x(n, mu, nu)
        for al in _idx(n):
            g = g - x(n, al, nu) * p(n, al, mu) * u
        out[(mu, nu)] = g
    return out


def structure_constants(n: int, literal: bool = False) -> dict[tuple[int, ...], UPoly]:
    """Nonzero entries ``C[(m, n, l, r, a, b)]`` with
    ``[X_mn, X_lr] = i u C_{mn,lr,ab} X_ab``.

    ``literal=True`` multiplies every entry by an extra ``i u``, reproducing a
    reading of the constants that double counts that factor; the bracket
    verifiers never use this array.
    """
    out: dict[tuple[int, ...], UPoly] = {}
    extra = I * U if literal else UPoly.const(1)
    for m_, n_, l_, r_, a, b in product(_idx(n), repeat=6):
        c = (int(m_ == r_ and l_ == a and n_ == b)) - int(l_ == n_ and m_ == a and r_ == b)
        if c:
            out[(m_, n_, l_, r_, a, b)] = extra * c
    return out


def bracket_rhs(r: RealizationSet, mn: tuple[int, int], lr: tuple[int, int]) -> WeylElement:
    """``s i u (delta_mr X_ln - delta_ln X_mr)`` with ``s`` the variant's sign."""
    (m_, n_), (l_, r_) = mn, lr
    out = WeylElement(r.n)
    if m_ == r_:
        out = out + r.generators[(l_, n_)]
    if l_ == n_:
        out = out - r.generators[(m_, r_)]
    return out * (I * r.u * r.bracket_sign)


def bracket_via_constants(r: RealizationSet, mn, lr, literal: bool = False) -> WeylElement:
    out = WeylElement(r.n)
    for (m_, n_, l_, r_, a, b), c in structure_constants(r.n, literal).items():
        if (m_, n_) == mn and (l_, r_) == lr:
            out = out + r.generators[(a, b)] * c
    return out * (I * r.u * r.bracket_sign)


def verify_gln(r: RealizationSet, keep_passing: bool = True) -> VerificationReport:
    """Residual of the gl(n) bracket for every index quadruple."""
    rep = VerificationReport(f"gln[{r.variant}]", keep_passing=keep_passing)
    rep.meta.update(n=r.n, variant=r.variant, u=str(r.u), bracket_sign=r.bracket_sign)
    idx = list(product(_idx(r.n), repeat=2))
    for mn in idx:
        for lr in idx:
            res = commutator(r.generators[mn], r.generators[lr]) - bracket_rhs(r, mn, lr)
            rep.add("gln-bracket", (mn, lr), res)
    return rep


def verify_duality(n: int, keep_passing: bool = True, yhat: RealizationSet | None = None) -> VerificationReport:
    """[xhat, yhat] = 0, the dual bracket for yhat, and yhat(-u) as a new
    realization of the original bracket that differs from xhat."""
    xh = build_realization(n, "first")
    yh = yhat if yhat is not None else build_realization(n, "dualOfFirst")
    rep = VerificationReport("duality", keep_passing=keep_passing)
    rep.meta.update(n=n)
    idx = list(product(_idx(n), repeat=2))
    for mn in idx:
        for lr in idx:
            rep.add("xhat-yhat-commute", (mn, lr), commutator(xh[mn], yh[lr]))
    rep.merge(_rename(verify_gln(yh, keep_passing), "dual-gln-bracket"))
    y_neg = build_realization(n, "dualOfFirst", -U)
    y_neg = RealizationSet(n, "first", U, y_neg.generators, y_neg.phi)
    rep.merge(_rename(verify_gln(y_neg, keep_passing), "yhat(-u)-gln-bracket"))
    differs = any(y_neg[mn] != xh[mn] for mn in idx)
    diff = next((y_neg[mn] - xh[mn] for mn in idx if y_neg[mn] != xh[mn]), WeylElement(n))
    rep.add("yhat(-u)-differs-from-xhat", "all", str(diff), passed=differs)
    return rep


def _rename(rep: VerificationReport, relation: str) -> VerificationReport:
    for rec in rep.records:
        rec.relation = relation
    rep.counts = {relation: [sum(v[0] for v in rep.counts.values()), sum(v[1] for v in rep.counts.values())]}
    return rep


def Z(n: int, mu: int, nu: int, u=U) -> WeylElement:
    """``Z_mn = delta_mn + u p_mn``."""
    out = p(n, mu, nu) * UPoly.coerce(u)
    return out + 1 if mu == nu else out


def L(n: int, mu: int, nu: int) -> WeylElement:
    """``L_mn = x_ma p_na``."""
    out = WeylElement(n)
    for al in _idx(n):
        out = out + x(n, mu, al) * p(n, nu, al)
    return out


def Ltilde(n: int, mu: int, nu: int) -> WeylElement:
    """``L~_mn = x_an p_am``."""
    out = WeylElement(n)
    for al in _idx(n):
        out = out + x(n, al, nu) * p(n, al, mu)
    return out


def verify_ZL_relations(n: int, keep_passing: bool = True) -> VerificationReport:
    xh = build_realization(n, "first")
    yh = build_realization(n, "dualOfFirst")
    rep = VerificationReport("ZL-relations", keep_passing=keep_passing)
    rep.meta.update(n=n)
    iu = I * U
    idx = list(product(_idx(n), repeat=2))
    Ls = {mn: L(n, *mn) for mn in idx}
    Lt = {mn: Ltilde(n, *mn) for mn in idx}
    Zs = {mn: Z(n, *mn) for mn in idx}
    for (m_, n_) in idx:
        for (l_, r_) in idx:
            mn, lr = (m_, n_), (l_, r_)
            rhs = Zs[(r_, n_)] * (-iu) if m_ == l_ else WeylElement(n)
            rep.add("[Z,xhat]", (mn, lr), commutator(Zs[mn], xh[lr]) - rhs)
            rhs = Zs[(m_, l_)] * (-iu) if r_ == n_ else WeylElement(n)
            rep.add("[Z,yhat]", (mn, lr), commutator(Zs[mn], yh[lr]) - rhs)
            rhs = WeylElement(n)
            if m_ == r_:
                rhs = rhs + Ls[(l_, n_)]
            if l_ == n_:
                rhs = rhs - Ls[(m_, r_)]
            rep.add("[L,L]", (mn, lr), commutator(Ls[mn], Ls[lr]) - rhs * I)
            rhs = WeylElement(n)
            if m_ == r_:
                rhs = rhs + Lt[(l_, n_)]
            if l_ == n_:
                rhs = rhs - Lt[(m_, r_)]
            rep.add("[Lt,Lt]", (mn, lr), commutator(Lt[mn], Lt[lr]) + rhs * I)
    return rep
