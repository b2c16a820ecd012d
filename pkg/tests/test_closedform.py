import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import random_instance
from ratdiff.closedform import (
    InvariantSequence,
    geometric_sum,
    invariant_recurrence_residual,
    invariant_term,
    magnitude_seeds,
    seed_lookup,
    solution_u,
    solution_u_at,
    solution_x,
    solution_x_at,
    solution_x_constant,
    solution_x_series,
    trig_magnitude,
    trig_weight,
)
from ratdiff.errors import InvalidInitialConditions, ZeroInvariant, ZeroTermInTrajectory
from ratdiff.recurrence import CoefficientSequence, InitialConditions, iterate

EXAMPLE1 = InitialConditions.of(F(1, 5), 9, 5, 7, 2)


def brute_invariants(v0, A, B, upto):
    """V_{n+1} = A_n V_n + B_n stepped one term at a time."""
    out = [v0]
    for n in range(upto):
        out.append(A[n] * out[-1] + B[n])
    return out


def orbit_invariants(values):
    return [1 / (values[n] * values[n + 2] * values[n + 4]) for n in range(len(values) - 4)]


def test_invariant_empty_conventions():
    seq = InvariantSequence(F(3, 7), 2, 5)
    assert invariant_term(0, seq) == F(3, 7)


def test_invariant_example1():
    seq = InvariantSequence.from_initial(EXAMPLE1, -1, 1)
    # V_0 = 1/2, V_1 = -1/2 + 1 = 1/2, V_2 = 1/2
    assert [invariant_term(n, seq) for n in range(3)] == [F(1, 2)] * 3
    orbit = iterate(EXAMPLE1, -1, 1, 30).values
    assert orbit_invariants(orbit) == [F(1, 2)] * 26


def test_invariant_with_unit_a_is_linear():
    seq = InvariantSequence(F(2, 3), 1, F(-5, 4))
    assert [invariant_term(n, seq) for n in range(20)] == [F(2, 3) + n * F(-5, 4) for n in range(20)]


def test_invariant_needs_nonzero_even_seeds():
    with pytest.raises(InvalidInitialConditions):
        InvariantSequence.from_initial((1, 2, 0, 3, 4), 1, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_invariant_forms_agree(seed):
    ic, A, B = random_instance(random.Random(seed))
    seq = InvariantSequence.from_initial(ic, A, B)
    brute = brute_invariants(seq.v0, A, B, 40)
    assert seq.table(40) == brute
    assert [invariant_term(n, seq) for n in range(41)] == brute
    orbit = iterate(ic, A, B, 45)
    if orbit.complete:
        assert orbit_invariants(orbit.values) == brute


def test_recurrence_residual_exact_zero():
    orbit = iterate(EXAMPLE1, -1, 1, 40)
    assert invariant_recurrence_residual(orbit, -1, 1) == 0
    fixed = iterate((1, 1, 1, 1, 1), F(1, 2), F(1, 2), 20)
    assert invariant_recurrence_residual(fixed, F(1, 2), F(1, 2)) == 0


def test_recurrence_residual_float():
    rng = random.Random(11)
    for _ in range(20):
        u = [rng.uniform(0.5, 2) for _ in range(5)]
        a, b = rng.uniform(0.5, 2), rng.uniform(0.5, 2)
        orbit = iterate(u, a, b, 60)
        assert invariant_recurrence_residual(orbit, a, b, relative=True) < 1e-9


def test_recurrence_residual_detects_wrong_coefficients():
    orbit = iterate(EXAMPLE1, -1, 1, 20)
    assert invariant_recurrence_residual(orbit, -1, 2) > 0


def test_recurrence_residual_rejects_zero_terms():
    orbit = iterate((0, 1, 1, 1, 1), 1, 1, 7)
    with pytest.raises(ZeroTermInTrajectory):
        invariant_recurrence_residual(orbit, 1, 1)


def test_solution_n0_returns_seed():
    for j in range(5):
        assert solution_u(j, 0, EXAMPLE1, -1, 1) == EXAMPLE1.u[j]
    # u_5 is the first computed term
    assert solution_u(5, 0, EXAMPLE1, -1, 1) == F(2, 63)


def test_solution_example1_is_six_periodic():
    for j in range(6):
        base = solution_u(j, 0, EXAMPLE1, -1, 1)
        assert all(solution_u(j, n, EXAMPLE1, -1, 1) == base for n in range(1, 8))


def test_solution_matches_orbit_at_u20():
    ic, A, B = random_instance(random.Random(2024))
    orbit = iterate(ic, A, B, 21)
    assert orbit.complete
    assert solution_u(2, 3, ic, A, B) == orbit.values[20]


def test_solution_zero_invariant_is_forbidden():
    B = CoefficientSequence.periodic([1, -2])
    # V_0 = 1, V_1 = 2, V_2 = 0
    with pytest.raises(ZeroInvariant):
        solution_u(0, 1, (1, 1, 1, 1, 1), 1, B)
    orbit = iterate((1, 1, 1, 1, 1), 1, B, 20)
    assert orbit.forbidden_at == 6


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_all_closed_forms_match_oracle(seed):
    ic, A, B = random_instance(random.Random(seed))
    orbit = iterate(ic, A, B, 50)
    if not orbit.complete:
        return
    seq = InvariantSequence.from_initial(ic, A, B)
    assert [solution_u_at(m, ic, A, B, seq) for m in range(50)] == list(orbit.values)
    assert solution_x_series(ic, A, B, 45) == list(orbit.values)
    assert [solution_x_at(m - 4, ic, A, B) for m in range(0, 50, 7)] == list(orbit.values[::7])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_constant_specialisation_agrees(seed):
    rng = random.Random(seed)
    ic, _, _ = random_instance(rng)
    a = F(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
    b = F(rng.choice([-3, -1, 1, 2]), rng.randint(1, 4))
    try:
        expected = [solution_x(j, n, ic, a, b) for j in range(6) for n in range(6)]
    except ZeroDivisionError:
        return
    assert [solution_x_constant(j, n, ic, a, b) for j in range(6) for n in range(6)] == expected


def test_constant_periodic_criterion_collapses():
    # a = 2, b = 1, P = -1 = (1 - a)/b
    ic = InitialConditions.of(1, 3, F(1, 2), -7, -2)
    assert ic.even_product == -1
    for j in range(5):
        assert all(solution_x_constant(j, n, ic, 2, 1) == ic.u[j] for n in range(10))


def test_constant_unit_a_brackets():
    ic = InitialConditions.parse("-0.2,3,1.3,0.7,-2")
    P = ic.even_product
    for j in range(5):
        expected = ic.u[j]
        for k in range(5):
            expected *= (1 + (6 * k + j) * P) / (1 + (6 * k + j + 2) * P)
        assert solution_x_constant(j, 5, ic, 1, 1) == expected


def test_constant_negative_a_is_periodic():
    ic = InitialConditions.of(F(3, 2), 4, F(-1, 3), 5, 7)
    x1 = solution_x_constant(5, 0, ic, -1, 1)
    for j in range(6):
        base = ic.u[j] if j < 5 else x1
        assert all(solution_x_constant(j, n, ic, -1, 1) == base for n in range(12))


def test_geometric_sum_branches():
    assert geometric_sum(F(1), 7) == 7
    assert geometric_sum(1.0 + 1e-14, 7) == 7
    assert geometric_sum(F(2), 5) == 31
    assert geometric_sum(F(-1), 5) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 5), st.integers(1, 6), st.integers(1, 6))
def test_telescoping(seed, j, n, m):
    ic, A, B = random_instance(random.Random(seed))
    V = InvariantSequence.from_initial(ic, A, B).table(6 * (n + m) + j + 6)
    if any(v == 0 for v in V):
        return
    first = second = whole = F(1)
    for k in range(n):
        first *= V[6 * k + j] / V[6 * k + j + 2]
        second *= V[6 * k + j + 2] / V[6 * k + j + 4]
        whole *= V[6 * k + j] / V[6 * k + j + 4]
    assert first * second == whole


def test_seed_table_is_six_periodic():
    table = magnitude_seeds(EXAMPLE1)
    assert table[4] == 1 / (EXAMPLE1.u[0] * EXAMPLE1.u[2])
    assert table[5] == 1 / (EXAMPLE1.u[1] * EXAMPLE1.u[3])
    for n in range(10):
        for j in range(6):
            assert seed_lookup(table, 6 * n + j) == table[j]


def test_trig_weights_match_cosines():
    for d in range(1, 50):
        direct = 2 * math.sqrt(3) / 3 * math.cos(d * math.pi / 2) * math.cos((d + 1) * math.pi / 6)
        assert abs(trig_weight(d) - direct) < 1e-12
        assert round(trig_weight(d)) in (-1, 0, 1)


def test_trig_magnitude_small_cases():
    ic = InitialConditions.of(F(3, 2), F(-2, 7), 5, F(1, 3), F(-4, 9))
    assert trig_magnitude(0, ic, 2, 3) == pytest.approx(1.5, rel=1e-15)
    # at n = 4 only k = 0 survives, with weight -1: |u_0 u_2|^-1 |u_0 u_2 u_4|
    assert trig_magnitude(4, ic, 2, 3) == pytest.approx(4 / 9, rel=1e-12)
    assert trig_magnitude(7, EXAMPLE1, -1, 1) == pytest.approx(9, rel=1e-12)


def test_trig_magnitude_matches_orbit():
    rng = random.Random(3)
    for _ in range(10):
        ic, A, B = random_instance(rng)
        orbit = iterate(ic, A, B, 40)
        if not orbit.complete:
            continue
        for n in range(40):
            assert trig_magnitude(n, ic, A, B) == pytest.approx(abs(float(orbit.values[n])), rel=1e-9)
