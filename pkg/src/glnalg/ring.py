"""Exact scalars: polynomials in the deformation parameter ``u`` over the
Gaussian rationals.

Internally a scalar term is addressed by a single integer key
``2 * udeg + ipow`` where ``ipow`` is 0 or 1 (the power of the imaginary
unit).  Multiplying two keys adds them; when both carry an ``I`` the product
contributes ``I**2 = -1``, so the key drops by 2 and the sign flips.  The
value attached to a key is a plain rational.  This keeps every inner loop
down to one rational multiplication.
"""

from __future__ import annotations

from numbers import Rational

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

__all__ = ["Q", "UPoly", "key", "key_mul", "key_udeg", "as_rational", "I", "U", "ONE"]


def key(udeg: int, ipow: int = 0) -> int:
    return 2 * udeg + ipow


def key_udeg(k: int) -> int:
    return k >> 1


def key_mul(a: int, b: int) -> tuple[int, int]:
    """Return ``(key, sign)`` for the product of two scalar keys."""
    if a & b & 1:
        return a + b - 2, -1
    return a + b, 1


def as_rational(value) -> Q:
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, (int, Rational)) or type(value).__name__ == "mpq":
        return Q(value)
    if isinstance(value, str):
        return Q(value)
    raise TypeError(f"cannot use {value!r} as an exact rational")


def _add_into(acc: dict, k, c) -> None:
    v = acc.get(k)
    if v is None:
        if c:
            acc[k] = c
    else:
        v = v + c
        if v:
            acc[k] = v
        else:
            del acc[k]


class UPoly:
    """Polynomial in ``u`` with Gaussian-rational coefficients.

    Immutable.  Construct with :meth:`const`, :meth:`u`, :meth:`i`, or by
    arithmetic on the module constants ``U``, ``I``, ``ONE``.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict[int, Q] | None = None):
        self._c = {k: Q(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def _raw(cls, coeffs: dict[int, Q]) -> UPoly:
        obj = cls.__new__(cls)
        obj._c = coeffs
        return obj

    @classmethod
    def const(cls, re=0, im=0) -> UPoly:
        c = {}
        if re:
            c[0] = as_rational(re)
        if im:
            c[1] = as_rational(im)
        return cls._raw(c)

    @classmethod
    def u(cls, power: int = 1) -> UPoly:
        return cls._raw({key(power): Q(1)})

    @classmethod
    def i(cls) -> UPoly:
        return cls._raw({1: Q(1)})

    @classmethod
    def coerce(cls, value) -> UPoly:
        if isinstance(value, UPoly):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex numbers are not exact; use UPoly.const")
        return cls.const(value)

    # ---- inspection ----
    def items(self):
        return self._c.items()

    def coeff(self, udeg: int) -> tuple[Q, Q]:
        """Gaussian coefficient of ``u**udeg`` as ``(real, imag)``."""
        return self._c.get(key(udeg), Q(0)), self._c.get(key(udeg, 1), Q(0))

    def degrees(self) -> list[int]:
        return sorted({key_udeg(k) for k in self._c})

    @property
    def valuation(self) -> int | None:
        return min((key_udeg(k) for k in self._c), default=None)

    @property
    def degree(self) -> int | None:
        return max((key_udeg(k) for k in self._c), default=None)

    def is_zero(self) -> bool:
        return not self._c

    def evaluate(self, u: complex) -> complex:
        total = 0j
        for k, c in self._c.items():
            total += float(c) * (1j if k & 1 else 1) * u ** key_udeg(k)
        return total

    def truncate(self, order: int) -> UPoly:
        return UPoly._raw({k: c for k, c in self._c.items() if key_udeg(k) <= order})

    # ---- arithmetic ----
    def __add__(self, other):
        other = UPoly.coerce(other)
        acc = dict(self._c)
        for k, c in other._c.items():
            _add_into(acc, k, c)
        return UPoly._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return UPoly._raw({k: -c for k, c in self._c.items()})

    def __sub__(self, other):
        return self + (-UPoly.coerce(other))

    def __rsub__(self, other):
        return UPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (UPoly, int, Rational)) and type(other).__name__ != "mpq":
            return NotImplemented
        other = UPoly.coerce(other)
        acc: dict[int, Q] = {}
        for ka, ca in self._c.items():
            for kb, cb in other._c.items():
                k, s = key_mul(ka, kb)
                _add_into(acc, k, ca * cb if s > 0 else -(ca * cb))
        return UPoly._raw(acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not polynomial")
        out = ONE
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = UPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        return f"UPoly({format_upoly(self)})"

    def __str__(self):
        return format_upoly(self)


def format_gaussian(re: Q, im: Q) -> str:
    if not im:
        return str(re)
    if im == 1:
        imag = "I"
    elif im == -1:
        imag = "-I"
    else:
        imag = f"{im}*I"
    if not re:
        return imag
    sign = "+" if im > 0 else "-"
    mag = -im if im < 0 else im
    imag = "I" if mag == 1 else f"{mag}*I"
    return f"({re} {sign} {imag})"


def format_scalar(re: Q, im: Q, udeg: int) -> str:
    """``coef*u^d`` with the coefficient omitted when it is exactly 1."""
    upart = "" if udeg == 0 else ("u" if udeg == 1 else f"u^{udeg}")
    coef = format_gaussian(re, im)
    if not upart:
        return coef
    if re == 1 and not im:
        return upart
    if re == -1 and not im:
        return "-" + upart
    return f"{coef}*{upart}"


def format_upoly(p: UPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for d in p.degrees():
        re, im = p.coeff(d)
        parts.append(format_scalar(re, im, d))
    out = parts[0]
    for piece in parts[1:]:
        out += f" - {piece[1:]}" if piece.startswith("-") and not piece.startswith("-(") else f" + {piece}"
    return out


ONE = UPoly.const(1)
U = UPoly.u()
I = UPoly.i()
