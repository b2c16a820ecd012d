"""Scalar backends: exact rationals, real floats and complex floats.

Every other module is written against plain Python numbers, so the backend
is whatever type the caller feeds in.  ``Fraction`` gives exact arithmetic
with canonical (reduced, positive-denominator) form; ``float`` and
``complex`` give IEEE doubles.  The helpers here handle ingestion, which is
where NaN/Inf are rejected, and the sixth-root-of-unity table.
"""
from __future__ import annotations

import math
import operator
from fractions import Fraction
from numbers import Number
from typing import Union

from .errors import DivisionByZero, NonFiniteValue

Rational = Fraction
Real = float
Complex = complex
Scalar = Union[Fraction, float, complex]

BACKENDS = ("rational", "float")

_SQRT3_2 = math.sqrt(3.0) / 2.0

# w**k for w = exp(i*pi/3), k = 0..5
_UNIT_ROOTS = (
    complex(1.0, 0.0),
    complex(0.5, _SQRT3_2),
    complex(-0.5, _SQRT3_2),
    complex(-1.0, 0.0),
    complex(-0.5, -_SQRT3_2),
    complex(0.5, -_SQRT3_2),
)

_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}


def rational(value) -> Fraction:
    """Exact rational from an int, Fraction, ``"p/q"`` or decimal string.

    Decimal strings are read exactly, so ``"0.2"`` becomes ``1/5``.  Floats
    are accepted and converted by their exact binary value.
    """
    if isinstance(value, float) and not math.isfinite(value):
        raise NonFiniteValue(f"non-finite value {value!r}")
    try:
        return Fraction(value.strip() if isinstance(value, str) else value)
    except ZeroDivisionError as exc:
        raise DivisionByZero(str(exc)) from None
    except (TypeError, ValueError) as exc:
        raise ValueError(f"cannot read {value!r} as a rational number") from exc


def real(value) -> float:
    """Finite float from a number or numeric string (``"p/q"`` allowed)."""
    if isinstance(value, str):
        value = rational(value)
    x = float(value)
    if not math.isfinite(x):
        raise NonFiniteValue(f"non-finite value {value!r}")
    return x


def complex_(re, im=0.0) -> complex:
    return complex(real(re), real(im))


def parse_scalar(text, backend: str = "rational") -> Scalar:
    """Read one number in the requested backend."""
    if backend == "rational":
        return rational(text)
    if backend == "float":
        return real(text)
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def to_backend(value, backend: str) -> Scalar:
    if backend == "rational":
        if isinstance(value, Fraction):
            return value
        return rational(value)
    return real(value)


def exactify(value):
    """Promote plain ints to ``Fraction`` so later true division stays exact."""
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    return value


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def rational_arith(lhs: Fraction, op: str, rhs: Fraction) -> Fraction:
    """Apply ``op`` (one of + - * / or their typographic forms) exactly."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    if fn is operator.truediv and rhs == 0:
        raise DivisionByZero(f"{lhs} / 0")
    return Fraction(fn(Fraction(lhs), Fraction(rhs)))


def unit_root_power(n: int) -> complex:
    """``exp(i*pi*n/3)``, looked up from the six-entry table (any integer n)."""
    return _UNIT_ROOTS[n % 6]


def format_scalar(value: Number) -> str:
    """CSV text: ``p/q`` for rationals, 17 significant digits for floats."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return f"{value:.17g}"
