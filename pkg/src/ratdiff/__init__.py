"""Order-5 rational difference equation: iteration, closed forms, symmetries.

The recurrence is

    x_{n+1} = x_n x_{n-2} x_{n-4} / (x_{n-1} x_{n-3} (a_n + b_n x_n x_{n-2} x_{n-4}))

or, relabelled with u_j = x_{j-4}, u_{n+5} = Omega(u_n, ..., u_{n+4}).
"""
from .closedform import (
    InvariantSequence,
    invariant_recurrence_residual,
    invariant_term,
    solution_u,
    solution_u_at,
    solution_x,
    solution_x_at,
    solution_x_constant,
    solution_x_series,
    trig_magnitude,
)
from .numerics import rational, rational_arith, real, unit_root_power
from .recurrence import (
    Cause,
    CoefficientSequence,
    InitialConditions,
    Status,
    Trajectory,
    iterate,
    iterate_x,
)

__version__ = "0.1.0"
