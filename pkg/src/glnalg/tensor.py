"""Finite sums of elementary tensors of Weyl monomials over 2 or 3 legs."""

from __future__ import annotations

from typing import Callable, Sequence

from .ring import Q, UPoly, _add_into, key_mul, key_udeg
from .weyl import DimensionMismatch, WeylElement, _is_scalar, mono_act, mono_product

__all__ = ["TensorElement", "tensor", "substitute_momenta", "substitute_momenta_tensor"]


class TensorElement:
    """``terms`` maps ``(scalar_key, (mono_1, ..., mono_legs))`` to a rational.

    Coefficients live at the top level only, so two tensors are equal iff
    their term dicts are equal.
    """

    __slots__ = ("n", "legs", "terms")

    def __init__(self, n: int, legs: int, terms: dict | None = None):
        if legs < 1:
            raise ValueError("a tensor needs at least one leg")
        self.n = n
        self.legs = legs
        self.terms = {} if terms is None else terms

    @classmethod
    def pure(cls, *factors: WeylElement) -> TensorElement:
        n = factors[0].n
        out = {(0, ()): Q(1)}
        for f in factors:
            if f.n != n:
                raise DimensionMismatch("all legs must share n")
            nxt: dict = {}
            for (k, monos), c in out.items():
                for (kf, mf), cf in f.terms.items():
                    kk, s = key_mul(k, kf)
                    _add_into(nxt, (kk, monos + (mf,)), c * cf if s > 0 else -(c * cf))
            out = nxt
        return cls(n, len(factors), out)

    @classmethod
    def unit(cls, n: int, legs: int) -> TensorElement:
        empty = (0,) * (2 * n * n)
        return cls(n, legs, {(0, (empty,) * legs): Q(1)})

    # ---- inspection ----
    def is_zero(self) -> bool:
        return not self.terms

    def u_degree(self) -> int | None:
        return max((key_udeg(k) for k, _ in self.terms), default=None)

    def truncate(self, order: int) -> TensorElement:
        return TensorElement(
            self.n, self.legs, {t: c for t, c in self.terms.items() if key_udeg(t[0]) <= order}
        )

    def leg(self, j: int) -> list:
        return [monos[j] for _, monos in self.terms]

    # ---- arithmetic ----
    def _check(self, other: TensorElement) -> None:
        if other.n != self.n or other.legs != self.legs:
            raise DimensionMismatch("tensor shape mismatch")

    def __add__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for t, c in other.terms.items():
            _add_into(acc, t, c)
        return TensorElement(self.n, self.legs, acc)

    def __neg__(self):
        return TensorElement(self.n, self.legs, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> TensorElement:
        c = UPoly.coerce(c)
        acc: dict = {}
        for (k, monos), v in self.terms.items():
            for kc, vc in c.items():
                kk, s = key_mul(k, kc)
                _add_into(acc, (kk, monos), v * vc if s > 0 else -(v * vc))
        return TensorElement(self.n, self.legs, acc)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return self.product(other)
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def product(self, other: TensorElement) -> TensorElement:
        """Leg-wise algebra product ``(a (x) b)(c (x) d) = ac (x) bd``."""
        self._check(other)
        acc: dict = {}
        for (ka, ma), ca in self.terms.items():
            for (kb, mb), cb in other.terms.items():
                k0, s0 = key_mul(ka, kb)
                parts = [((k0, ()), ca * cb if s0 > 0 else -(ca * cb))]
                for x, y in zip(ma, mb):
                    nxt = []
                    for (k, monos), c in parts:
                        for shift, coef, mono in mono_product(x, y):
                            kk, s = key_mul(k, shift)
                            nxt.append(((kk, monos + (mono,)), c * (coef * s)))
                    parts = nxt
                for t, c in parts:
                    _add_into(acc, t, c)
        return TensorElement(self.n, self.legs, acc)

    def act_on(self, target: TensorElement) -> TensorElement:
        """Apply this tensor as an operator, leg by leg, via the |> action."""
        self._check(target)
        acc: dict = {}
        for (ka, ma), ca in self.terms.items():
            for (kb, mb), cb in target.terms.items():
                k, s = key_mul(ka, kb)
                c = ca * cb if s > 0 else -(ca * cb)
                monos = []
                for x, f in zip(ma, mb):
                    r = mono_act(x, f)
                    if r is None:
                        break
                    shift, coef, mono = r
                    k, s = key_mul(k, shift)
                    c = c * (coef * s)
                    monos.append(mono)
                else:
                    _add_into(acc, (k, tuple(monos)), c)
        return TensorElement(self.n, self.legs, acc)

    def permute(self, order: Sequence[int]) -> TensorElement:
        """New tensor whose leg ``j`` is old leg ``order[j]``."""
        if sorted(order) != list(range(self.legs)):
            raise ValueError("not a permutation of the legs")
        return TensorElement(
            self.n,
            self.legs,
            {(k, tuple(monos[j] for j in order)): c for (k, monos), c in self.terms.items()},
        )

    def swap(self) -> TensorElement:
        return self.permute(list(reversed(range(self.legs))))

    def multiply_legs(self) -> WeylElement:
        """The multiplication map ``m``: product of the legs in order."""
        acc: dict = {}
        m2 = 2 * self.n * self.n
        for (k, monos), c in self.terms.items():
            parts = [(k, (0,) * m2, c)]
            for mono in monos:
                nxt = []
                for kk, cur, cc in parts:
                    for shift, coef, prod in mono_product(cur, mono):
                        k2, s = key_mul(kk, shift)
                        nxt.append((k2, prod, cc * (coef * s)))
                parts = nxt
            for kk, mono, cc in parts:
                _add_into(acc, (kk, mono), cc)
        return WeylElement(self.n, acc)

    def expand_leg(self, j: int, fn: Callable[[tuple], "TensorElement"]) -> TensorElement:
        """Replace leg ``j`` by the tensor ``fn(mono)`` (an algebra map applied
        to that leg), splicing its legs in place."""
        acc: dict = {}
        new_legs = None
        for (k, monos), c in self.terms.items():
            img = fn(monos[j])
            new_legs = self.legs - 1 + img.legs
            for (ki, mi), ci in img.terms.items():
                kk, s = key_mul(k, ki)
                _add_into(acc, (kk, monos[:j] + mi + monos[j + 1 :]), c * ci if s > 0 else -(c * ci))
        if new_legs is None:
            new_legs = self.legs + 1
        return TensorElement(self.n, new_legs, acc)

    def evaluate_momenta(self, points: Sequence, u: complex):
        """Numerically evaluate a momentum-only tensor with leg ``j`` momenta
        replaced by the matrix ``points[j]``."""
        import numpy as np

        m = self.n * self.n
        flat = [np.asarray(pt, dtype=complex).reshape(m) for pt in points]
        total = 0j
        for (k, monos), c in self.terms.items():
            val = complex(float(c)) * (1j if k & 1 else 1) * u ** key_udeg(k)
            for mono, pt in zip(monos, flat):
                if any(mono[:m]):
                    raise ValueError("tensor carries coordinates")
                for e, v in zip(mono[m:], pt):
                    if e:
                        val *= v**e
            total += val
        return total

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.n == other.n and self.legs == other.legs and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.legs, frozenset(self.terms.items())))

    def __repr__(self):
        return f"TensorElement(n={self.n}, legs={self.legs}, {self})"

    def __str__(self):
        from .textio import format_tensor

        return format_tensor(self)


def tensor(*factors: WeylElement) -> TensorElement:
    return TensorElement.pure(*factors)


def substitute_momenta(
    h: WeylElement, images: dict[int, WeylElement], order: int | None = None
) -> WeylElement:
    """Algebra substitution ``p_s -> images[s]`` in a momentum-only element.

    ``images`` is keyed by flat momentum index ``s`` in ``0..n^2-1``; the
    images must commute with each other (momentum-only images always do).
    Products are truncated at u-degree ``order`` when given.
    """
    n = h.n
    m = n * n
    if h.has_coordinates():
        raise ValueError("substitution target must be momentum-only")
    powers: dict[tuple[int, int], WeylElement] = {}

    def power(s: int, e: int) -> WeylElement:
        if (s, e) not in powers:
            if e == 1:
                val = images[s]
            else:
                val = power(s, e - 1) * images[s]
            powers[(s, e)] = val.truncate(order) if order is not None else val
        return powers[(s, e)]

    out = WeylElement(n)
    for (k, mono), c in h.terms.items():
        term = WeylElement(n, {(k, (0,) * (2 * m)): c})
        for s, e in enumerate(mono[m:]):
            if e:
                term = term * power(s, e)
                if order is not None:
                    term = term.truncate(order)
        out = out + term
    return out


def substitute_momenta_tensor(
    h: WeylElement, images: dict[int, TensorElement], order: int | None = None
) -> TensorElement:
    """Substitute ``p_s -> images[s]`` (commuting momentum-only tensors)."""
    n = h.n
    m = n * n
    if h.has_coordinates():
        raise ValueError("substitution target must be momentum-only")
    legs = next(iter(images.values())).legs
    powers: dict[tuple[int, int], TensorElement] = {}

    def power(s: int, e: int) -> TensorElement:
        if (s, e) not in powers:
            val = images[s] if e == 1 else power(s, e - 1).product(images[s])
            powers[(s, e)] = val.truncate(order) if order is not None else val
        return powers[(s, e)]

    out = TensorElement(n, legs)
    for (k, mono), c in h.terms.items():
        term = TensorElement(n, legs, {(k, ((0,) * (2 * m),) * legs): c})
        for s, e in enumerate(mono[m:]):
            if e:
                term = term.product(power(s, e))
                if order is not None:
                    term = term.truncate(order)
        out = out + term
    return out
