"""Canonical text form for Weyl elements and tensors.

Grammar (whitespace between tokens is insignificant except that it
separates generator factors)::

    element  := "0" | ["-"] term (("+" | "-") term)*
    term     := factor (["*"] factor)*            # tensors: legs split by "⊗"
    factor   := "(" element ")" | rational | "I" | "u" ["^" int]
              | ("x" | "p") "[" int "," int "]" ["^" int]
    rational := int ["/" int]

Output is normal ordered: one term per (u-power, monomial), the Gaussian
coefficient first, then ``u^d``, then `` * `` and the monomial with the
coordinate block before the momentum block, e.g.
``(3/2 + 1/2*I)*u^2 * x[1,2]^2 p[2,1]``.  Tensor terms join leg monomials
with `` ⊗ `` and write an empty leg as ``1``: ``u * p[1,1] ⊗ p[1,1]``.
Parsing multiplies factors in the order written, so non-normal-ordered input
such as ``p[1,1] x[1,1]`` is accepted and normal ordered.
"""

from __future__ import annotations

import re

from .ring import I, Q, U, format_scalar, key_udeg
from .tensor import TensorElement
from .weyl import GeneratorIndex, WeylElement, one

__all__ = ["format_weyl", "format_tensor", "format_monomial", "parse_weyl", "parse_tensor"]

TENSOR_SEP = "⊗"


def format_monomial(mono: tuple, n: int) -> str:
    m = n * n
    parts = []
    for block, name in ((mono[:m], "x"), (mono[m:], "p")):
        for s, e in enumerate(block):
            if e:
                f = f"{name}[{s // n + 1},{s % n + 1}]"
                parts.append(f if e == 1 else f"{f}^{e}")
    return " ".join(parts)


def _sort_key(item):
    (udeg, monos) = item
    return (udeg, tuple(-sum(m) for m in monos), tuple(tuple(-e for e in m) for m in monos))


def _grouped(terms: dict, wrap) -> list[tuple[int, tuple, Q, Q]]:
    groups: dict = {}
    for (k, monos), c in terms.items():
        g = groups.setdefault((key_udeg(k), wrap(monos)), [Q(0), Q(0)])
        g[k & 1] += c
    return [(d, monos, re, im) for (d, monos), (re, im) in sorted(groups.items(), key=lambda kv: _sort_key(kv[0]))]


def _join(pieces: list[str]) -> str:
    if not pieces:
        return "0"
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-") and not piece.startswith("-("):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def _term(re, im, d: int, body: str) -> str:
    scalar = format_scalar(re, im, d)
    if not body:
        return scalar
    if scalar == "1":
        return body
    if scalar == "-1":
        return "-" + body
    return f"{scalar} * {body}"


def format_weyl(a: WeylElement) -> str:
    pieces = []
    for d, (mono,), re, im in _grouped(a.terms, lambda mono: (mono,)):
        pieces.append(_term(re, im, d, format_monomial(mono, a.n)))
    return _join(pieces)


def format_tensor(t: TensorElement) -> str:
    pieces = []
    for d, monos, re, im in _grouped(t.terms, lambda monos: monos):
        body = f" {TENSOR_SEP} ".join(format_monomial(mo, t.n) or "1" for mo in monos)
        pieces.append(_term(re, im, d, body))
    return _join(pieces)


# ---- parsing ----

_TOKEN = re.compile(
    r"\s*(?:(?P<gen>[xp])\[\s*(?P<mu>\d+)\s*,\s*(?P<nu>\d+)\s*\]"
    r"|(?P<num>\d+(?:/\d+)?)|(?P<sym>[()+\-*^I]|u|" + TENSOR_SEP + r"))"
)


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, object]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = mt.end()
        if mt.group("gen"):
            out.append(("gen", (mt.group("gen"), int(mt.group("mu")), int(mt.group("nu")))))
        elif mt.group("num"):
            try:
                out.append(("num", Q(mt.group("num"))))
            except ZeroDivisionError:
                raise ParseError(f"zero denominator at {mt.start()}") from None
        else:
            out.append(("sym", mt.group("sym")))
    return out


class _Parser:
    def __init__(self, text: str, n: int, legs: int | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.n = n
        self.legs = legs

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, sym: str):
        kind, val = self.take()
        if kind != "sym" or val != sym:
            raise ParseError(f"expected {sym!r}, found {val!r}")

    def integer(self) -> int:
        kind, val = self.take()
        if kind != "num" or val.denominator != 1:
            raise ParseError("expected an integer exponent")
        return int(val)

    def expression(self, tensor: bool):
        sign = 1
        if self.peek() == ("sym", "-"):
            self.take()
            sign = -1
        total = self.term(tensor)
        if sign < 0:
            total = -total
        while self.peek() in (("sym", "+"), ("sym", "-")):
            _, op = self.take()
            t = self.term(tensor)
            total = total + t if op == "+" else total - t
        return total

    def term(self, tensor: bool):
        legs = [one(self.n)]
        started = False
        while True:
            kind, val = self.peek()
            if kind is None or (kind == "sym" and val in ("+", "-", ")")):
                break
            if kind == "sym" and val == "*":
                self.take()
                continue
            if kind == "sym" and val == TENSOR_SEP:
                if not tensor:
                    raise ParseError("tensor separator in a Weyl element")
                self.take()
                legs.append(one(self.n))
                continue
            legs[-1] = legs[-1] * self.factor()
            started = True
        if not started:
            raise ParseError("empty term")
        if not tensor:
            return legs[0]
        if self.legs is not None and len(legs) != self.legs:
            raise ParseError(f"expected {self.legs} legs, found {len(legs)}")
        return TensorElement.pure(*legs)

    def factor(self) -> WeylElement:
        kind, val = self.take()
        n = self.n
        if kind == "num":
            out = WeylElement.scalar(n, val)
        elif kind == "gen":
            g, mu, nu = val
            out = WeylElement.generator(n, GeneratorIndex(g, mu, nu))
        elif val == "I":
            out = WeylElement.scalar(n, I)
        elif val == "u":
            out = WeylElement.scalar(n, U)
        elif val == "(":
            out = self.expression(tensor=False)
            self.expect(")")
        else:
            raise ParseError(f"unexpected token {val!r}")
        if self.peek() == ("sym", "^"):
            self.take()
            out = out ** self.integer()
        return out


def parse_weyl(text: str, n: int) -> WeylElement:
    if text.strip() == "0":
        return WeylElement(n)
    p = _Parser(text, n, None)
    out = p.expression(tensor=False)
    if p.i != len(p.toks):
        raise ParseError("trailing input")
    return out


def parse_tensor(text: str, n: int, legs: int) -> TensorElement:
    if text.strip() == "0":
        return TensorElement(n, legs)
    p = _Parser(text, n, legs)
    out = p.expression(tensor=True)
    if p.i != len(p.toks):
        raise ParseError("trailing input")
    return out
