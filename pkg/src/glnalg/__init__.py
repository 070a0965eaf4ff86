"""Exact and numeric verification engine for linear and general realizations
of gl(n) on a matrix-indexed Heisenberg algebra: star products, coproducts of
momenta, and twists."""

from .ring import I, ONE, U, UPoly
from .tensor import TensorElement, tensor
from .weyl import GeneratorIndex, WeylElement, act, commutator, multiply, normal_order, one, p, x

__version__ = "0.1.0"

__all__ = [
    "I",
    "ONE",
    "U",
    "UPoly",
    "GeneratorIndex",
    "WeylElement",
    "TensorElement",
    "tensor",
    "act",
    "commutator",
    "multiply",
    "normal_order",
    "one",
    "p",
    "x",
]
