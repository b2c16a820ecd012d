"""Direct iteration of the order-5 rational recurrence.

Two labelings of the same orbit are supported:

    x_{n+1} = x_n x_{n-2} x_{n-4} / (x_{n-1} x_{n-3} (a_n + b_n x_n x_{n-2} x_{n-4}))
    u_{n+5} = u_n u_{n+2} u_{n+4} / (u_{n+1} u_{n+3} (A_n + B_n u_n u_{n+2} u_{n+4}))

with u_j = x_{j-4}.  The u-form is canonical internally.  Iteration stops
early, without raising, the first time a denominator factor or the bracket
vanishes; the partial orbit is returned with the reason attached.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import (
    CoefficientIndexOutOfRange,
    InvalidCoefficient,
    InvalidInitialConditions,
)
from .numerics import exactify, parse_scalar, to_backend


class CoefficientSequence:
    """A rule giving a_n (or b_n) for n >= 0.

    ``kind`` is ``"constant"``, ``"periodic"`` or ``"explicit"``.  Explicit
    sequences only answer 0 <= n < len(values).
    """

    __slots__ = ("kind", "values")

    def __init__(self, kind: str, values: Sequence):
        if kind not in ("constant", "periodic", "explicit"):
            raise ValueError(f"unknown coefficient kind {kind!r}")
        values = tuple(exactify(v) for v in values)
        if not values:
            raise ValueError("a coefficient sequence needs at least one value")
        if kind == "constant" and len(values) != 1:
            raise ValueError("a constant sequence takes exactly one value")
        for i, v in enumerate(values):
            if v == 0:
                raise InvalidCoefficient(f"coefficient value #{i} is zero")
        self.kind = kind
        self.values = values

    @classmethod
    def constant(cls, value) -> "CoefficientSequence":
        return cls("constant", (value,))

    @classmethod
    def periodic(cls, values: Sequence) -> "CoefficientSequence":
        return cls("periodic", values)

    @classmethod
    def explicit(cls, values: Sequence) -> "CoefficientSequence":
        return cls("explicit", values)

    @classmethod
    def parse(cls, text: str, backend: str = "rational") -> "CoefficientSequence":
        """Read ``"v"``, ``"periodic:v1,v2,..."`` or ``"explicit:v1,v2,..."``."""
        text = text.strip()
        kind, sep, rest = text.partition(":")
        if not sep:
            kind, rest = "constant", text
        kind = kind.strip().lower()
        items = [parse_scalar(t, backend) for t in rest.split(",") if t.strip()]
        return cls(kind, items)

    def __getitem__(self, n: int):
        if n < 0:
            raise CoefficientIndexOutOfRange(f"negative coefficient index {n}")
        if self.kind == "constant":
            return self.values[0]
        if self.kind == "periodic":
            return self.values[n % len(self.values)]
        if n >= len(self.values):
            raise CoefficientIndexOutOfRange(
                f"explicit sequence has {len(self.values)} values, index {n} requested"
            )
        return self.values[n]

    def to_backend(self, backend: str) -> "CoefficientSequence":
        return CoefficientSequence(self.kind, [to_backend(v, backend) for v in self.values])

    def __eq__(self, other):
        if not isinstance(other, CoefficientSequence):
            return NotImplemented
        return self.kind == other.kind and self.values == other.values

    def __hash__(self):
        return hash((self.kind, self.values))

    def __repr__(self):
        return f"CoefficientSequence.{self.kind}({list(self.values)!r})"


def as_sequence(value) -> CoefficientSequence:
    """Accept a bare scalar as a constant sequence."""
    if isinstance(value, CoefficientSequence):
        return value
    return CoefficientSequence.constant(value)


@dataclass(frozen=True)
class InitialConditions:
    """Seed values u_0..u_4, i.e. x_{-4}..x_0."""

    u: tuple

    def __post_init__(self):
        u = tuple(exactify(v) for v in self.u)
        if len(u) != 5:
            raise InvalidInitialConditions(f"need exactly five initial values, got {len(u)}")
        object.__setattr__(self, "u", u)

    @classmethod
    def of(cls, *values) -> "InitialConditions":
        if len(values) == 1 and not isinstance(values[0], (int, float, complex, str)):
            values = tuple(values[0])
        return cls(tuple(values))

    @classmethod
    def parse(cls, text: str, backend: str = "rational") -> "InitialConditions":
        return cls(tuple(parse_scalar(t, backend) for t in text.split(",") if t.strip()))

    def x(self, i: int):
        """x_i for i in -4..0."""
        if not -4 <= i <= 0:
            raise IndexError(f"initial x-index must be in -4..0, got {i}")
        return self.u[i + 4]

    @property
    def even_product(self):
        """u_0 u_2 u_4 = x_{-4} x_{-2} x_0."""
        return self.u[0] * self.u[2] * self.u[4]

    def to_backend(self, backend: str) -> "InitialConditions":
        return InitialConditions(tuple(to_backend(v, backend) for v in self.u))

    def __iter__(self):
        return iter(self.u)


class Status(enum.Enum):
    COMPLETE = "complete"
    FORBIDDEN = "forbidden"


class Cause(enum.Enum):
    ZERO_DENOMINATOR_FACTOR = "ZeroDenominatorFactor"
    ZERO_BRACKET = "ZeroBracket"
    NON_FINITE = "NonFinite"  # float overflow/underflow only


@dataclass(frozen=True)
class Trajectory:
    """An orbit u_0, u_1, ... plus how the iteration ended.

    ``offset`` is the label of ``values[0]``: 0 for u-indexing, -4 for
    x-indexing.  ``forbidden_at`` is always a position in ``values`` (the
    u-index of the first term that could not be computed).
    """

    values: tuple
    status: Status = Status.COMPLETE
    forbidden_at: Optional[int] = None
    cause: Optional[Cause] = None
    offset: int = 0

    @property
    def complete(self) -> bool:
        return self.status is Status.COMPLETE

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def label(self, position: int) -> int:
        return position + self.offset

    def at(self, label: int):
        """Value by its label (u- or x-index depending on ``offset``)."""
        pos = label - self.offset
        if pos < 0:
            raise IndexError(label)
        return self.values[pos]

    def items(self) -> Iterator[tuple]:
        for pos, v in enumerate(self.values):
            yield pos + self.offset, v

    @property
    def forbidden_label(self) -> Optional[int]:
        return None if self.forbidden_at is None else self.forbidden_at + self.offset

    def relabel(self, offset: int) -> "Trajectory":
        return Trajectory(self.values, self.status, self.forbidden_at, self.cause, offset)


def _finite(v) -> bool:
    if isinstance(v, float):
        return math.isfinite(v)
    if isinstance(v, complex):
        return math.isfinite(v.real) and math.isfinite(v.imag)
    return True


def iterate(ic, A, B, count: int) -> Trajectory:
    """First ``count`` terms u_0..u_{count-1} of the u-form recurrence.

    ``A`` and ``B`` are coefficient sequences (bare scalars mean constants).
    """
    if count < 5:
        raise ValueError(f"count must be at least 5, got {count}")
    ic = ic if isinstance(ic, InitialConditions) else InitialConditions.of(ic)
    A, B = as_sequence(A), as_sequence(B)
    vals = list(ic.u)
    for n in range(count - 5):
        u0, u1, u2, u3, u4 = vals[n:n + 5]
        if u1 == 0 or u3 == 0:
            return Trajectory(tuple(vals), Status.FORBIDDEN, n + 5, Cause.ZERO_DENOMINATOR_FACTOR)
        p = u0 * u2 * u4
        bracket = A[n] + B[n] * p
        if bracket == 0:
            return Trajectory(tuple(vals), Status.FORBIDDEN, n + 5, Cause.ZERO_BRACKET)
        try:
            nxt = p / (u1 * u3 * bracket)
        except ZeroDivisionError:
            # float product underflowed to zero
            return Trajectory(tuple(vals), Status.FORBIDDEN, n + 5, Cause.NON_FINITE)
        if not _finite(nxt):
            return Trajectory(tuple(vals), Status.FORBIDDEN, n + 5, Cause.NON_FINITE)
        vals.append(nxt)
    return Trajectory(tuple(vals))


def iterate_x(ic, a, b, count: int) -> Trajectory:
    """Same orbit as :func:`iterate`, labelled x_{-4}, x_{-3}, ...

    The coefficient subscripts coincide in both forms, so a_n is used as A_n.
    """
    return iterate(ic, a, b, count).relabel(-4)
