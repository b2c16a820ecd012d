"""Dynamical checks: period detection, the period-6 criterion, decay at a = 1."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ForbiddenOrbit, TrajectoryTooShort
from .numerics import exactify, is_exact, to_backend
from .recurrence import InitialConditions, Trajectory, iterate_x


@dataclass
class PeriodReport:
    """``first_index`` is a position in the trajectory (its u-index)."""

    detected_period: Optional[int]
    first_index: Optional[int]
    exact: bool
    tol: Optional[float] = None
    notes: list = field(default_factory=list)

    def summary(self) -> str:
        if self.detected_period is None:
            return "period=none"
        mode = "exact" if self.exact else f"approx(tol={self.tol:g})"
        return f"period={self.detected_period} {mode} first_index={self.first_index}"


def _same(x, y, exact: bool, tol: float) -> bool:
    if exact:
        return x == y
    scale = max(abs(x), abs(y))
    return abs(x - y) <= tol * scale


def detect_period(t: Trajectory, max_period: int, tol: float = 1e-9) -> PeriodReport:
    """Smallest p <= max_period such that the whole tail repeats with period p.

    The tail is the longest suffix on which values[k+p] == values[k]; it must
    span at least two periods past its start for p to count.  Rational orbits
    are compared exactly, float orbits to relative ``tol``.
    """
    if not t.complete:
        raise ForbiddenOrbit(t.forbidden_at, t.cause.value)
    vals = t.values
    L = len(vals)
    if max_period < 1:
        raise ValueError("max_period must be positive")
    if L < 3 * max_period:
        raise TrajectoryTooShort(f"need at least {3 * max_period} terms, have {L}")
    exact = all(is_exact(v) for v in vals)
    for p in range(1, max_period + 1):
        k = L - p - 1
        while k >= 0 and _same(vals[k + p], vals[k], exact, tol):
            k -= 1
        start = k + 1
        if L - p - start >= 2 * p:
            return PeriodReport(p, start, exact, None if exact else tol)
    return PeriodReport(None, None, exact, None if exact else tol)


def period_six_condition(ic, a, b, tol: float = 1e-12) -> bool:
    """x_-4 x_-2 x_0 = (1 - a)/b with a != 1, tested as P b = 1 - a."""
    ic = ic if isinstance(ic, InitialConditions) else InitialConditions.of(ic)
    a, b = exactify(a), exactify(b)
    if b == 0:
        raise ValueError("b must be nonzero")
    P = ic.even_product
    if is_exact(a) and is_exact(b) and is_exact(P):
        return a != 1 and P * b == 1 - a
    if abs(a - 1) < tol:
        return False
    return abs(P * b - (1 - a)) <= tol * max(1.0, abs(1 - a))


def period_notes(ic, a, b, report: PeriodReport) -> list:
    """Flag period-6 orbits that the criterion's 'only if' direction rules out."""
    notes = []
    if report.detected_period in (1, 2, 3, 6) and not period_six_condition(ic, a, b):
        notes.append(
            "period-6 criterion 'only if' not satisfied: orbit is 6-periodic although "
            "x_-4*x_-2*x_0 != (1-a)/b"
        )
    return notes


@dataclass
class DecayReport:
    max_abs_tail: float
    exponent_estimate: float
    head_product: Fraction
    n0: int
    j: int
    fit_window: tuple
    near_singular: bool
    decreasing_from: dict
    terms: int

    @property
    def monotone_after_first_sextet(self) -> bool:
        return all(v is not None and v <= 1 for v in self.decreasing_from.values())

    def summary(self) -> str:
        verdict = "decays" if self.monotone_after_first_sextet else "not monotone"
        lines = [
            f"{verdict}, exponent ~ {self.exponent_estimate:.4f} "
            f"(fit over sextets {self.fit_window[0]}..{self.fit_window[1]}, residue j={self.j})",
            f"max_abs_tail: {self.max_abs_tail:.6e}",
            f"head_product(n0={self.n0}, j={self.j}): {self.head_product} "
            f"~ {float(self.head_product):.6g}",
        ]
        if self.near_singular:
            lines.append("warning: NearSingular (some bracket 1 + m b P is below 1e-6)")
        return "\n".join(lines)


def head_product(j: int, n0: int) -> Fraction:
    """prod_{k=0}^{n0} (1 - 2/(6k+j+2)); zero when j = 0 because of the k = 0 factor."""
    out = Fraction(1)
    for k in range(n0 + 1):
        out *= 1 - Fraction(2, 6 * k + j + 2)
    return out


def asymptotic_start(j: int, bP, threshold: float = 10.0) -> int:
    """Smallest n0 >= 0 with |(6k+j+2) b P| > threshold for every k > n0."""
    m = abs(float(bP))
    if m == 0:
        raise ValueError("b P must be nonzero")
    k = max(1, math.floor(threshold / m / 6.0) - 1)
    while (6 * k + j + 2) * m <= threshold:
        k += 1
    while k > 1 and (6 * (k - 1) + j + 2) * m > threshold:
        k -= 1
    return k - 1


def exact_decay_product(j: int, n: int, P, b):
    """prod_{k<n} (1 - 2 b P / (1 + (6k+j+2) b P)), the exact a = 1 ratio x_{6n+j-4}/x_{j-4}."""
    bP = exactify(b) * P
    out = bP ** 0
    for k in range(n):
        out = out * (1 - 2 * bP / (1 + (6 * k + j + 2) * bP))
    return out


def _decreasing_from(vals, r: int) -> Optional[int]:
    """Smallest sextet n from which |vals[6n+r]| is strictly decreasing."""
    seq = [abs(vals[i]) for i in range(r, len(vals), 6)]
    if len(seq) < 2:
        return None
    n = len(seq) - 1
    while n > 0 and seq[n] < seq[n - 1]:
        n -= 1
    return n if n < len(seq) - 1 else None


def fit_decay_exponent(values, j: int, n_lo: int, n_hi: int) -> float:
    """Least-squares slope of ln|values[6n+j]| against ln n for n_lo <= n <= n_hi."""
    ns = np.arange(n_lo, n_hi + 1)
    ys = np.array([abs(float(values[6 * n + j])) for n in ns])
    slope, _ = np.polyfit(np.log(ns), np.log(ys), 1)
    return float(slope)


def convergence_report(
    ic,
    b,
    n_max: int = 6000,
    j: int = 4,
    backend: str = "float",
    fit_window: Optional[tuple] = None,
    threshold: float = 10.0,
) -> DecayReport:
    """Iterate with a = 1 up to x_{n_max} and summarise the decay.

    ``j`` selects the residue class u_{6n+j} = x_{6n+j-4} used for the
    exponent fit and the head product; the default j = 4 is x_{6n}.
    """
    ic = ic if isinstance(ic, InitialConditions) else InitialConditions.of(ic)
    ic = ic.to_backend(backend)
    b = to_backend(b, backend)
    one = to_backend(1, backend)
    t = iterate_x(ic, one, b, n_max + 5)
    if not t.complete:
        raise ForbiddenOrbit(t.forbidden_at, t.cause.value)
    vals = t.values
    P = ic.even_product
    bP = b * P
    near = any(abs(1 + m * bP) < 1e-6 for m in range(len(vals) + 2))
    n_hi = (len(vals) - 1 - j) // 6
    if fit_window is None:
        fit_window = (max(1, n_hi // 10), n_hi)
    lo, hi = fit_window
    if hi > n_hi or lo < 1 or hi - lo < 2:
        raise ValueError(f"fit window {fit_window} not inside 1..{n_hi}")
    slope = fit_decay_exponent(vals, j, lo, hi)
    n0 = asymptotic_start(j, bP, threshold)
    return DecayReport(
        max_abs_tail=max(abs(float(v)) for v in vals[-6:]),
        exponent_estimate=slope,
        head_product=head_product(j, n0),
        n0=n0,
        j=j,
        fit_window=(lo, hi),
        near_singular=near,
        decreasing_from={r: _decreasing_from(vals, r) for r in range(6)},
        terms=len(vals),
    )


SPECIAL_CASES = {
    "a1_bpos": (1, 1),
    "a1_bneg": (1, -1),
    "aneg1_bpos": (-1, 1),
    "aneg1_bneg": (-1, -1),
}


def special_case_values(case: str, ic, j: int, n: int):
    """Per-residue formulas for a = +-1, b = +-1, one display per j.

    For j = 3 the leading factor is x_-1 (the residue class of x_{6n-1}).
    For j = 5 it is x_1 = x_-4 x_-2 x_0 / (x_-1 x_-3 (a + b x_-4 x_-2 x_0)).
    """
    try:
        a, b = SPECIAL_CASES[case]
    except KeyError:
        raise ValueError(f"unknown case {case!r}; expected one of {sorted(SPECIAL_CASES)}") from None
    if not 0 <= j <= 5:
        raise ValueError(f"residue j must be in 0..5, got {j}")
    ic = ic if isinstance(ic, InitialConditions) else InitialConditions.of(ic)
    P = ic.even_product
    bP = b * P
    leading = {
        0: lambda: ic.x(-4),
        1: lambda: ic.x(-3),
        2: lambda: ic.x(-2),
        3: lambda: ic.x(-1),
        4: lambda: ic.x(0),
        5: lambda: P / (ic.x(-1) * ic.x(-3) * (a + bP)),
    }[j]()
    out = leading
    if a == 1:
        for k in range(n):
            out = out * (1 + (6 * k + j) * bP) / (1 + (6 * k + j + 2) * bP)
    else:
        sign = (-1) ** j
        w = sign + bP * Fraction(1 - sign, 2)
        for _ in range(n):
            out = out * w / w
    return out
