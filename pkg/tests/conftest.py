import json
from pathlib import Path

import pytest
import sympy as sp

from glnalg.ring import key_udeg

DATA = Path(__file__).parent / "data"
_u = sp.Symbol("u")


def _scalar(k, c):
    return sp.Rational(int(c.numerator), int(c.denominator)) * _u ** key_udeg(k) * (sp.I if k & 1 else 1)


def _mono(mono, n, leg=None):
    m = n * n
    out = sp.Integer(1)
    suffix = "" if leg is None else f"_{leg}"
    for s, e in enumerate(mono):
        if e:
            kind = "x" if s < m else "p"
            r = s % m
            out *= sp.Symbol(f"{kind}{r // n + 1}{r % n + 1}{suffix}") ** e
    return out


def to_sympy(a):
    """Commutative image of a normal-ordered element: x's before p's."""
    return sp.expand(sum((_scalar(k, c) * _mono(mono, a.n) for (k, mono), c in a.terms.items()), sp.Integer(0)))


def tensor_to_sympy(t):
    total = sp.Integer(0)
    for (k, monos), c in t.terms.items():
        term = _scalar(k, c)
        for j, mono in enumerate(monos):
            term *= _mono(mono, t.n, j)
        total += term
    return sp.expand(total)


def same(a, frozen: str) -> bool:
    return sp.expand(a - sp.sympify(frozen, locals={"u": _u})) == 0


@pytest.fixture(scope="session")
def oracle():
    return json.loads((DATA / "oracle_values.json").read_text())


def pytest_terminal_summary(terminalreporter):
    import test_acceptance as acc

    if not acc.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(acc.VERDICTS):
        terminalreporter.write_line(acc.VERDICTS[num])
    missing = sorted(set(range(1, 12)) - set(acc.VERDICTS))
    if missing:
        terminalreporter.write_line(f"not run or errored before a verdict: {missing}")
