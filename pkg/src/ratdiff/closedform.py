"""Explicit solution formulas for the order-5 recurrence.

The orbit carries an invariant ``V_n = 1/(u_n u_{n+2} u_{n+4})`` that obeys
the first-order linear recurrence ``V_{n+1} = A_n V_n + B_n``, hence

    V_n = V_0 prod_{k<n} A_k + sum_{l<n} B_l prod_{l<k<n} A_k.

Every residue class mod 6 of the orbit is then a telescoping product of
invariant ratios, ``u_{6n+j} = u_j prod_{k<n} V_{6k+j} / V_{6k+j+2}``.
This module evaluates those formulas in three shapes (invariant ratios,
the fully expanded coefficient brackets, and the constant-coefficient
specialisation with geometric sums) plus the trigonometric magnitude form.
None of it iterates the recurrence; :mod:`ratdiff.recurrence` is the
independent oracle these are checked against.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction

from .errors import (
    InvalidInitialConditions,
    ZeroDenominatorBracket,
    ZeroInvariant,
    ZeroTermInTrajectory,
)
from .numerics import exactify
from .recurrence import InitialConditions, Trajectory, as_sequence


def _ic(ic) -> InitialConditions:
    return ic if isinstance(ic, InitialConditions) else InitialConditions.of(ic)


class InvariantSequence:
    """V_0 = 1/(u_0 u_2 u_4) together with the coefficient sequences.

    ``table(N)`` memoises V_0..V_N for this instance only; the lock makes
    concurrent readers safe.
    """

    def __init__(self, v0, A, B):
        if v0 == 0:
            raise InvalidInitialConditions("V_0 must be nonzero")
        self.v0 = v0
        self.A = as_sequence(A)
        self.B = as_sequence(B)
        self._cache = [v0]
        self._prefix = 1  # prod_{k < len(cache)-1} A_k
        self._acc = v0  # V_0 + sum_{l < len(cache)-1} B_l / prod_{k <= l} A_k
        self._lock = threading.Lock()

    @classmethod
    def from_initial(cls, ic, A, B) -> "InvariantSequence":
        ic = _ic(ic)
        u = ic.u
        if u[0] == 0 or u[2] == 0 or u[4] == 0:
            raise InvalidInitialConditions(
                "closed forms need u_0, u_2, u_4 (x_-4, x_-2, x_0) all nonzero"
            )
        one = Fraction(1) if isinstance(ic.even_product, (int, Fraction)) else 1.0
        return cls(one / ic.even_product, A, B)

    def term(self, n: int):
        return invariant_term(n, self)

    def table(self, upto: int) -> list:
        """[V_0, ..., V_upto] from the factored prefix-product form.

        V_n = P_n (V_0 + sum_{l<n} B_l / P_{l+1}) with P_m = prod_{k<m} A_k,
        which is the explicit sum with the common prefix product pulled out.
        """
        with self._lock:
            while len(self._cache) <= upto:
                l = len(self._cache) - 1
                self._prefix = self._prefix * self.A[l]
                self._acc = self._acc + self.B[l] / self._prefix
                self._cache.append(self._prefix * self._acc)
            return self._cache[: upto + 1]


def invariant_term(n: int, seq: InvariantSequence):
    """V_n by the explicit product/sum formula (empty product 1, empty sum 0)."""
    if n < 0:
        raise ValueError(f"invariant index must be >= 0, got {n}")
    suffix = 1
    acc = 0
    for l in range(n - 1, -1, -1):
        acc = acc + seq.B[l] * suffix
        suffix = suffix * seq.A[l]
    return seq.v0 * suffix + acc


def invariant_recurrence_residual(trajectory: Trajectory, A, B, relative: bool = False):
    """max_n |V_{n+1} - (A_n V_n + B_n)| with V_n read off the orbit.

    With rational orbits the result is an exact ``Fraction`` (0 when the
    identity holds).  ``relative=True`` divides each residual by |V_{n+1}|.
    """
    u = trajectory.values
    if len(u) < 7:
        raise ValueError(f"need at least 7 terms, got {len(u)}")
    for i, v in enumerate(u):
        if v == 0:
            raise ZeroTermInTrajectory(f"u_{i} is zero")
    A, B = as_sequence(A), as_sequence(B)
    one = Fraction(1) if isinstance(u[0], (int, Fraction)) else 1.0
    V = [one / (u[n] * u[n + 2] * u[n + 4]) for n in range(len(u) - 4)]
    worst = 0 * one
    for n in range(len(V) - 1):
        r = abs(V[n + 1] - (A[n] * V[n] + B[n]))
        if relative:
            r = r / abs(V[n + 1])
        if r > worst:
            worst = r
    return worst


def _fifth_term(ic: InitialConditions, V1):
    """u_5 = 1/(u_1 u_3 V_1); it is not a seed value but the j=5 class needs it."""
    if V1 == 0:
        raise ZeroInvariant("V_1 = 0: u_5 is undefined")
    return 1 / (ic.u[1] * ic.u[3] * V1)


def solution_u(j: int, n: int, ic, A, B, seq: InvariantSequence | None = None):
    """u_{6n+j} as u_j times the product of invariant ratios V_{6k+j}/V_{6k+j+2}."""
    if not 0 <= j <= 5:
        raise ValueError(f"residue j must be in 0..5, got {j}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    ic = _ic(ic)
    if seq is None:
        seq = InvariantSequence.from_initial(ic, A, B)
    V = seq.table(6 * max(n - 1, 0) + j + 2)
    value = ic.u[j] if j < 5 else _fifth_term(ic, V[1])
    for k in range(n):
        den = V[6 * k + j + 2]
        if den == 0:
            raise ZeroInvariant(f"V_{6 * k + j + 2} = 0")
        value = value * V[6 * k + j] / den
    return value


def solution_u_at(m: int, ic, A, B, seq: InvariantSequence | None = None):
    return solution_u(m % 6, m // 6, ic, A, B, seq)


def coefficient_bracket(m: int, P, a, b):
    """prod_{k<m} a_k + P sum_{l<m} b_l prod_{l<k<m} a_k  (equals P V_m)."""
    a, b = as_sequence(a), as_sequence(b)
    suffix = 1
    acc = 0
    for l in range(m - 1, -1, -1):
        acc = acc + b[l] * suffix
        suffix = suffix * a[l]
    return suffix + P * acc


def solution_x(j: int, n: int, ic, a, b):
    """x_{6n+j-4} from the expanded bracket form with general a_n, b_n."""
    if not 0 <= j <= 5:
        raise ValueError(f"residue j must be in 0..5, got {j}")
    ic = _ic(ic)
    P = ic.even_product
    if P == 0:
        raise InvalidInitialConditions("x_-4 x_-2 x_0 must be nonzero")
    if j < 5:
        value = ic.u[j]
    else:
        w1 = coefficient_bracket(1, P, a, b)
        if w1 == 0:
            raise ZeroDenominatorBracket("a_0 + b_0 x_-4 x_-2 x_0 = 0")
        value = P / (ic.u[1] * ic.u[3] * w1)
    for k in range(n):
        den = coefficient_bracket(6 * k + j + 2, P, a, b)
        if den == 0:
            raise ZeroDenominatorBracket(f"bracket at index {6 * k + j + 2} vanishes")
        value = value * coefficient_bracket(6 * k + j, P, a, b) / den
    return value


def solution_x_at(label: int, ic, a, b):
    """x_label for label >= -4 via :func:`solution_x`."""
    m = label + 4
    if m < 0:
        raise ValueError(f"x-index must be >= -4, got {label}")
    return solution_x(m % 6, m // 6, ic, a, b)


def _is_one(a) -> bool:
    if isinstance(a, (int, Fraction)):
        return a == 1
    return abs(a - 1) < 1e-12


def geometric_sum(a, m: int):
    """sum_{l<m} a**l, with the a = 1 branch returning m."""
    if _is_one(a):
        return m * (a ** 0)
    return (1 - a ** m) / (1 - a)


def solution_x_constant(j: int, n: int, ic, a, b):
    """x_{6n+j-4} for constant coefficients a_n = a, b_n = b."""
    if not 0 <= j <= 5:
        raise ValueError(f"residue j must be in 0..5, got {j}")
    ic = _ic(ic)
    a, b = exactify(a), exactify(b)
    P = ic.even_product
    if P == 0:
        raise InvalidInitialConditions("x_-4 x_-2 x_0 must be nonzero")
    Pb = P * b

    def bracket(m):
        return a ** m + Pb * geometric_sum(a, m)

    if j < 5:
        value = ic.u[j]
    else:
        w1 = bracket(1)
        if w1 == 0:
            raise ZeroDenominatorBracket("a + b x_-4 x_-2 x_0 = 0")
        value = P / (ic.u[1] * ic.u[3] * w1)
    for k in range(n):
        den = bracket(6 * k + j + 2)
        if den == 0:
            raise ZeroDenominatorBracket(f"bracket at index {6 * k + j + 2} vanishes")
        value = value * bracket(6 * k + j) / den
    return value


def magnitude_seeds(ic) -> tuple:
    """Six-periodic seed table (u_0, u_1, u_2, u_3, 1/(u_0 u_2), 1/(u_1 u_3))."""
    u = _ic(ic).u
    one = Fraction(1) if isinstance(u[0], (int, Fraction)) else 1.0
    return (u[0], u[1], u[2], u[3], one / (u[0] * u[2]), one / (u[1] * u[3]))


def seed_lookup(table, m: int):
    return table[m % 6]


_COS_HALF_PI = (1.0, 0.0, -1.0, 0.0)
_S3 = math.sqrt(3.0) / 2.0
_COS_SIXTH_PI = (1.0, _S3, 0.5, 0.0, -0.5, -_S3, -1.0, -_S3, -0.5, 0.0, 0.5, _S3)


def trig_weight(d: int) -> float:
    """(2 sqrt3 / 3) cos(d pi/2) cos((d+1) pi/6), cosines from exact tables."""
    return 2.0 * math.sqrt(3.0) / 3.0 * _COS_HALF_PI[d % 4] * _COS_SIXTH_PI[(d + 1) % 12]


def _log_abs(v) -> float:
    if isinstance(v, Fraction):
        return math.log(abs(v.numerator)) - math.log(v.denominator)
    return math.log(abs(v))


def trig_magnitude(n: int, ic, A, B, seq: InvariantSequence | None = None) -> float:
    """|u_n| from the seed table and a cosine-weighted sum of ln|V_k|."""
    ic = _ic(ic)
    if any(v == 0 for v in ic.u):
        raise InvalidInitialConditions("all initial values must be nonzero")
    if seq is None:
        seq = InvariantSequence.from_initial(ic, A, B)
    V = seq.table(max(n - 1, 0))
    total = 0.0
    for k in range(n):
        if V[k] == 0:
            raise ZeroInvariant(f"V_{k} = 0 inside the logarithm")
        total += trig_weight(n - k) * _log_abs(V[k])
    head = abs(float(seed_lookup(magnitude_seeds(ic), n)))
    return head * math.exp(total)


def solution_x_series(ic, a, b, last_label: int) -> list:
    """[x_-4, ..., x_last_label] from the expanded bracket form.

    Same formula as :func:`solution_x`, with each bracket computed once and
    the per-residue products accumulated left to right.
    """
    ic = _ic(ic)
    P = ic.even_product
    if P == 0:
        raise InvalidInitialConditions("x_-4 x_-2 x_0 must be nonzero")
    M = last_label + 4
    brackets = [coefficient_bracket(m, P, a, b) for m in range(max(M - 3, 2))]
    out = []
    for m in range(M + 1):
        j, n = m % 6, m // 6
        if n == 0:
            if j < 5:
                out.append(ic.u[j])
            else:
                if brackets[1] == 0:
                    raise ZeroDenominatorBracket("a_0 + b_0 x_-4 x_-2 x_0 = 0")
                out.append(P / (ic.u[1] * ic.u[3] * brackets[1]))
            continue
        den = brackets[m - 4]
        if den == 0:
            raise ZeroDenominatorBracket(f"bracket at index {m - 4} vanishes")
        out.append(out[m - 6] * brackets[m - 6] / den)
    return out
