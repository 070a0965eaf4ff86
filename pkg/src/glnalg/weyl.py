"""Normal-ordered arithmetic in the Heisenberg algebra on n x n matrix
coordinates ``x[mu,nu]`` and momenta ``p[mu,nu]``.

Relations: coordinates commute, momenta commute, ``[p_ab, x_cd] = -i d_ac d_bd``.
Every element is stored normal ordered (coordinates left of momenta), with
each block in lexicographic (mu, nu) order.

A monomial is a flat exponent tuple of length ``2 n^2``: the first ``n^2``
entries are coordinate exponents, the rest momentum exponents, both indexed
by ``(mu - 1) * n + (nu - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb, factorial
from numbers import Rational
from typing import Iterable, Literal

from .ring import Q, UPoly, _add_into, key_mul, key_udeg

__all__ = [
    "GeneratorIndex",
    "WeylElement",
    "normal_order",
    "multiply",
    "commutator",
    "act",
    "x",
    "p",
    "one",
    "GeneratorIndexError",
]

Mono = tuple


class GeneratorIndexError(ValueError):
    """Generator index outside ``1..n``."""


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GeneratorIndex:
    kind: Literal["x", "p"]
    mu: int
    nu: int

    def check(self, n: int) -> None:
        if self.kind not in ("x", "p"):
            raise GeneratorIndexError(f"unknown generator kind {self.kind!r}")
        if not (1 <= self.mu <= n and 1 <= self.nu <= n):
            raise GeneratorIndexError(f"index ({self.mu},{self.nu}) out of range 1..{n}")

    def slot(self, n: int) -> int:
        self.check(n)
        base = 0 if self.kind == "x" else n * n
        return base + (self.mu - 1) * n + (self.nu - 1)


# (-i)^k = SIGN[k % 4] * i^(k & 1)
_NEG_I_SIGN = (1, -1, -1, 1)


@lru_cache(maxsize=None)
def _swap(pexp: tuple, xexp: tuple) -> tuple:
    """Normal order ``p^B x^C``; entries ``(k, coef, x_rest, p_rest)`` mean
    ``coef * (-i)^k * x^x_rest p^p_rest``."""
    ranges = [range(min(b, c) + 1) for b, c in zip(pexp, xexp)]
    out = []
    for ks in product(*ranges):
        coef = 1
        for b, c, k in zip(pexp, xexp, ks):
            if k:
                coef *= comb(b, k) * comb(c, k) * factorial(k)
        xr = tuple(c - k for c, k in zip(xexp, ks))
        pr = tuple(b - k for b, k in zip(pexp, ks))
        out.append((sum(ks), coef, xr, pr))
    return tuple(out)


@lru_cache(maxsize=None)
def mono_product(a: Mono, b: Mono) -> tuple:
    """Product of two normal monomials: entries ``(key_shift, coef, mono)``."""
    m = len(a) // 2
    ax, ap = a[:m], a[m:]
    bx, bp = b[:m], b[m:]
    if not any(ap) or not any(bx):
        mono = tuple(i + j for i, j in zip(ax, bx)) + tuple(i + j for i, j in zip(ap, bp))
        return ((0, 1, mono),)
    out = []
    for k, coef, xr, pr in _swap(ap, bx):
        mono = tuple(i + j for i, j in zip(ax, xr)) + tuple(i + j for i, j in zip(pr, bp))
        out.append((k & 1, coef * _NEG_I_SIGN[k % 4], mono))
    return tuple(out)


@lru_cache(maxsize=None)
def mono_act(a: Mono, f: Mono) -> tuple | None:
    """``x^A p^B |> x^C`` for a coordinate monomial ``f``: ``(key_shift, coef, mono)``
    or ``None`` when the derivative vanishes."""
    m = len(a) // 2
    ax, ap = a[:m], a[m:]
    fx = f[:m]
    coef = 1
    for b, c in zip(ap, fx):
        if b > c:
            return None
        if b:
            coef *= factorial(c) // factorial(c - b)
    k = sum(ap)
    mono = tuple(i + c - b for i, c, b in zip(ax, fx, ap)) + (0,) * m
    return (k & 1, coef * _NEG_I_SIGN[k % 4], mono)


def _is_scalar(value) -> bool:
    return isinstance(value, (UPoly, int, Rational)) or type(value).__name__ == "mpq"


class WeylElement:
    """Finite sum of normal-ordered monomials with ``UPoly`` coefficients.

    ``terms`` maps ``(scalar_key, mono)`` to a rational; see :mod:`glnalg.ring`
    for the scalar key.  Treat instances as immutable.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        if n < 1:
            raise ValueError("dimension n must be >= 1")
        self.n = n
        self.terms = {} if terms is None else terms

    # ---- constructors ----
    @classmethod
    def zero(cls, n: int) -> WeylElement:
        return cls(n)

    @classmethod
    def scalar(cls, n: int, c) -> WeylElement:
        c = UPoly.coerce(c)
        empty = (0,) * (2 * n * n)
        return cls(n, {(k, empty): v for k, v in c.items()})

    @classmethod
    def generator(cls, n: int, g: GeneratorIndex) -> WeylElement:
        mono = [0] * (2 * n * n)
        mono[g.slot(n)] = 1
        return cls(n, {(0, tuple(mono)): Q(1)})

    @classmethod
    def from_monomial(cls, n: int, mono: Mono, c=1) -> WeylElement:
        if len(mono) != 2 * n * n:
            raise DimensionMismatch("monomial length does not match n")
        c = UPoly.coerce(c)
        return cls(n, {(k, tuple(mono)): v for k, v in c.items()})

    # ---- inspection ----
    @property
    def m(self) -> int:
        return self.n * self.n

    def is_zero(self) -> bool:
        return not self.terms

    def coefficients(self) -> dict[Mono, UPoly]:
        out: dict[Mono, dict] = {}
        for (k, mono), c in self.terms.items():
            out.setdefault(mono, {})[k] = c
        return {mono: UPoly._raw(c) for mono, c in out.items()}

    def coefficient(self, mono: Mono) -> UPoly:
        return UPoly._raw({k: c for (k, mo), c in self.terms.items() if mo == mono})

    def monomials(self) -> list[Mono]:
        return sorted({mono for _, mono in self.terms})

    def has_coordinates(self) -> bool:
        m = self.m
        return any(any(mono[:m]) for _, mono in self.terms)

    def has_momenta(self) -> bool:
        m = self.m
        return any(any(mono[m:]) for _, mono in self.terms)

    def u_valuation(self) -> int | None:
        return min((key_udeg(k) for k, _ in self.terms), default=None)

    def u_degree(self) -> int | None:
        return max((key_udeg(k) for k, _ in self.terms), default=None)

    def x_degree(self) -> int:
        m = self.m
        return max((sum(mono[:m]) for _, mono in self.terms), default=0)

    def p_degree(self) -> int:
        m = self.m
        return max((sum(mono[m:]) for _, mono in self.terms), default=0)

    def truncate(self, order: int) -> WeylElement:
        """Drop every term of u-degree above ``order``."""
        return WeylElement(self.n, {t: c for t, c in self.terms.items() if key_udeg(t[0]) <= order})

    def u_part(self, udeg: int) -> WeylElement:
        return WeylElement(self.n, {t: c for t, c in self.terms.items() if key_udeg(t[0]) == udeg})

    def coordinate_free(self) -> WeylElement:
        m = self.m
        return WeylElement(self.n, {t: c for t, c in self.terms.items() if not any(t[1][:m])})

    def evaluate_u(self, u) -> WeylElement:
        """Substitute an exact rational for ``u``."""
        u = Q(u)
        acc: dict = {}
        for (k, mono), c in self.terms.items():
            _add_into(acc, (k & 1, mono), c * u ** key_udeg(k))
        return WeylElement(self.n, acc)

    # ---- arithmetic ----
    def _check(self, other: WeylElement) -> None:
        if other.n != self.n:
            raise DimensionMismatch(f"dimension mismatch: n={self.n} vs n={other.n}")

    def __add__(self, other):
        if _is_scalar(other):
            other = WeylElement.scalar(self.n, other)
        if not isinstance(other, WeylElement):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for t, c in other.terms.items():
            _add_into(acc, t, c)
        return WeylElement(self.n, acc)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement(self.n, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other):
        if _is_scalar(other):
            other = WeylElement.scalar(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> WeylElement:
        c = UPoly.coerce(c)
        acc: dict = {}
        for (k, mono), v in self.terms.items():
            for kc, vc in c.items():
                kk, s = key_mul(k, kc)
                _add_into(acc, (kk, mono), v * vc if s > 0 else -(v * vc))
        return WeylElement(self.n, acc)

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return multiply(self, other)
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        out = one(self.n)
        for _ in range(e):
            out = multiply(out, self)
        return out

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.n == other.n and self.terms == other.terms
        if _is_scalar(other):
            return self.terms == WeylElement.scalar(self.n, other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return f"WeylElement(n={self.n}, {self})"

    def __str__(self):
        from .textio import format_weyl

        return format_weyl(self)


def one(n: int) -> WeylElement:
    return WeylElement.scalar(n, 1)


def x(n: int, mu: int, nu: int) -> WeylElement:
    return WeylElement.generator(n, GeneratorIndex("x", mu, nu))


def p(n: int, mu: int, nu: int) -> WeylElement:
    return WeylElement.generator(n, GeneratorIndex("p", mu, nu))


def multiply(a: WeylElement, b: WeylElement) -> WeylElement:
    """Exact normal-ordered product ``a * b``."""
    a._check(b)
    acc: dict = {}
    for (ka, ma), ca in a.terms.items():
        for (kb, mb), cb in b.terms.items():
            k0, s0 = key_mul(ka, kb)
            cab = ca * cb if s0 > 0 else -(ca * cb)
            for shift, coef, mono in mono_product(ma, mb):
                k, s = key_mul(k0, shift)
                _add_into(acc, (k, mono), cab * (coef * s))
    return WeylElement(a.n, acc)


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return multiply(a, b) - multiply(b, a)


def normal_order(n: int, factors: Iterable[GeneratorIndex]) -> WeylElement:
    """Normal-ordered expansion of the product of ``factors`` (left to right)."""
    out = one(n)
    for g in factors:
        out = multiply(out, WeylElement.generator(n, g))
    return out


def act(a: WeylElement, f: WeylElement) -> WeylElement:
    """``a |> f``: coordinates multiply, ``p_ab`` acts as ``-i d/dx_ab``."""
    a._check(f)
    if f.has_momenta():
        raise ValueError("act() needs a coordinate polynomial as its second argument")
    acc: dict = {}
    for (ka, ma), ca in a.terms.items():
        for (kf, mf), cf in f.terms.items():
            r = mono_act(ma, mf)
            if r is None:
                continue
            shift, coef, mono = r
            k0, s0 = key_mul(ka, kf)
            k, s = key_mul(k0, shift)
            _add_into(acc, (k, mono), ca * cf * (coef * s * s0))
    return WeylElement(a.n, acc)
