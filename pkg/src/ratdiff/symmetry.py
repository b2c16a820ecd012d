"""Lie point symmetries of the u-form recurrence, checked numerically.

A characteristic Q(n, u) generates a symmetry when the linearised condition

    Q(n+5, Omega) - sum_{j=0}^{4} dOmega/du_{n+j} * Q(n+j, u_{n+j}) = 0

holds on solutions.  The four characteristics here are w**(m n) * u for the
multipliers m in {4, 2, 5, 1} with w = exp(i pi/3), i.e. (-w)^n, (-conj w)^n,
(conj w)^n and w^n.  The partial derivatives are written out in closed form;
a central-difference estimate is available as a cross-check.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import OmegaUndefined, ZeroArgument
from .numerics import unit_root_power


class Characteristic(enum.Enum):
    K1 = 4  # (-w)^n = w^(4n)
    K2 = 2  # (-conj w)^n = w^(2n)
    K3 = 5  # (conj w)^n = w^(-n)
    K4 = 1  # w^n

    def basis(self, n: int) -> complex:
        return unit_root_power(self.value * n)

    def __call__(self, n: int, u: complex) -> complex:
        return self.basis(n) * u


def characteristic_value(c: Characteristic, n: int, u: complex) -> complex:
    return c.basis(n) * u


def basis_constraint_residual(c: Characteristic, n: int) -> float:
    """|b_n + b_{n+2} + b_{n+4}| for the characteristic's basis sequence."""
    return abs(c.basis(n) + c.basis(n + 2) + c.basis(n + 4))


# Planted non-symmetries used as negative controls.
def identity_characteristic(n: int, u: complex) -> complex:
    return u


def quadratic_characteristic(n: int, u: complex) -> complex:
    return unit_root_power(n) * u * u


@dataclass(frozen=True)
class SymmetryPoint:
    """Arguments of the right-hand side: index n, u_n..u_{n+4}, A_n, B_n."""

    n: int
    u: tuple
    A: complex
    B: complex

    def __post_init__(self):
        u = tuple(complex(v) for v in self.u)
        if len(u) != 5:
            raise OmegaUndefined(f"need five values u_n..u_(n+4), got {len(u)}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "A", complex(self.A))
        object.__setattr__(self, "B", complex(self.B))
        if u[1] == 0 or u[3] == 0:
            raise OmegaUndefined("u_(n+1) u_(n+3) = 0")
        if self.bracket == 0:
            raise OmegaUndefined("A_n + B_n u_n u_(n+2) u_(n+4) = 0")

    @property
    def bracket(self) -> complex:
        u = self.u
        return self.A + self.B * u[0] * u[2] * u[4]


def omega(u: Sequence[complex], A: complex, B: complex) -> complex:
    u0, u1, u2, u3, u4 = u
    D = A + B * u0 * u2 * u4
    if u1 * u3 == 0 or D == 0:
        raise OmegaUndefined("right-hand side is singular here")
    return u0 * u2 * u4 / (u1 * u3 * D)


def omega_partials(p: SymmetryPoint) -> list:
    """Exact partial derivatives dOmega/du_{n+j}, j = 0..4."""
    u0, u1, u2, u3, u4 = p.u
    A = p.A
    D = p.bracket
    W = omega(p.u, p.A, p.B)
    base = A / (u1 * u3 * D * D)
    return [base * u2 * u4, -W / u1, base * u0 * u4, -W / u3, base * u0 * u2]


def finite_difference_partials(p: SymmetryPoint, h: float = 1e-6) -> list:
    out = []
    for j in range(5):
        up = list(p.u)
        dn = list(p.u)
        up[j] += h
        dn[j] -= h
        out.append((omega(up, p.A, p.B) - omega(dn, p.A, p.B)) / (2 * h))
    return out


def linearized_residual(
    c: Characteristic | Callable[[int, complex], complex], p: SymmetryPoint
) -> complex:
    """Q(n+5, Omega) minus the five derivative-weighted shifted characteristics."""
    q = c
    n = p.n
    u0, u1, u2, u3, u4 = p.u
    A = p.A
    D = p.bracket
    W = u0 * u2 * u4 / (u1 * u3 * D)
    D2 = u1 * u3 * D * D
    return (
        q(n + 5, W)
        - u2 * u4 * A / D2 * q(n, u0)
        + u2 * u4 * u0 / (u3 * u1 * u1 * D) * q(n + 1, u1)
        - u4 * u0 * A / D2 * q(n + 2, u2)
        + u4 * u2 * u0 / (u1 * u3 * u3 * D) * q(n + 3, u3)
        - u2 * u0 * A / D2 * q(n + 4, u4)
    )


def scaled_residual(c, p: SymmetryPoint) -> float:
    """|residual| / max(1, |Omega|)."""
    W = omega(p.u, p.A, p.B)
    return abs(linearized_residual(c, p)) / max(1.0, abs(W))


def canonical_coordinate(n: int, u: complex) -> complex:
    """w^(-n) ln|u|, the coordinate in which the K4 flow is a translation."""
    if u == 0:
        raise ZeroArgument("canonical coordinate needs u != 0")
    return unit_root_power(-n) * math.log(abs(u))


def log_invariant(n: int, s_n: complex, s_n2: complex, s_n4: complex) -> complex:
    """s_n w^n + s_{n+2} w^(n+2) + s_{n+4} w^(n+4)."""
    return s_n * unit_root_power(n) + s_n2 * unit_root_power(n + 2) + s_n4 * unit_root_power(n + 4)


def log_invariant_defect(orbit: Sequence, n: int) -> float:
    """Relative gap between exp(-log_invariant) and 1/|u_n u_{n+2} u_{n+4}|."""
    s = [canonical_coordinate(n + i, complex(orbit[n + i])) for i in (0, 2, 4)]
    lhs = cmath.exp(-log_invariant(n, *s))
    target = 1.0 / abs(complex(orbit[n]) * complex(orbit[n + 2]) * complex(orbit[n + 4]))
    return abs(lhs - target) / target


def group_action_defect(p: SymmetryPoint, eps: float, c: Characteristic = Characteristic.K4) -> float:
    """|Omega(u_hat) - Omega(u) (1 + eps b_{n+5})| for u_hat_j = u_j exp(eps b_{n+j}).

    For a genuine symmetry this is O(eps**2).
    """
    n = p.n
    moved = [p.u[j] * cmath.exp(eps * c.basis(n + j)) for j in range(5)]
    W = omega(p.u, p.A, p.B)
    return abs(omega(moved, p.A, p.B) - W * (1 + eps * c.basis(n + 5)))


def sample_points(
    seed: int,
    count: int,
    n_values: Iterable[int] = range(12),
    radius: tuple = (0.5, 2.0),
    min_bracket: float = 0.1,
) -> list:
    """Seeded random admissible points with |u|, |A|, |B| in ``radius``.

    Points with |A + B u_n u_{n+2} u_{n+4}| <= ``min_bracket`` are redrawn.
    """
    rng = np.random.default_rng(seed)
    n_values = list(n_values)
    lo, hi = radius

    def draw(k):
        r = rng.uniform(lo, hi, size=k)
        phi = rng.uniform(0.0, 2.0 * math.pi, size=k)
        return r * np.exp(1j * phi)

    points = []
    while len(points) < count:
        u = draw(5)
        A, B = draw(2)
        n = int(rng.choice(n_values))
        if abs(A + B * u[0] * u[2] * u[4]) <= min_bracket:
            continue
        points.append(SymmetryPoint(n, tuple(complex(v) for v in u), complex(A), complex(B)))
    return points


@dataclass
class SweepResult:
    name: str
    residuals: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if self.residuals.size else 0.0

    def passes(self, tol: float = 1e-10) -> bool:
        return bool(np.all(self.residuals < tol))

    def fraction_above(self, threshold: float) -> float:
        if not self.residuals.size:
            return 0.0
        return float(np.mean(self.residuals > threshold))


def sweep(c, points: Sequence[SymmetryPoint], name: Optional[str] = None) -> SweepResult:
    if name is None:
        name = c.name if isinstance(c, Characteristic) else getattr(c, "__name__", "custom")
    res = np.array([scaled_residual(c, p) for p in points], dtype=float)
    return SweepResult(name, res)
