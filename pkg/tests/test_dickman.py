import math
import random

import numpy as np
import pytest

from billingsley import (DomainError, NumericalError, ParameterError,
                         QuadratureConfig, build_rho_table, h_function,
                         recursion_residual, rho, rho_via_alternating_sum)
from conftest import H_ORACLE, RHO_ORACLE


def test_rho_is_one_on_initial_interval(table):
    assert rho(table, 0.0) == 1.0
    assert rho(table, 0.5) == 1.0
    assert rho(table, 1.0) == 1.0


def test_rho_analytic_on_1_2(table):
    us = 1.0 + np.arange(1001) * 1e-3
    err = np.max(np.abs(rho(table, us) - (1.0 - np.log(us))))
    assert err < 1e-9


@pytest.mark.parametrize("u", sorted(RHO_ORACLE))
def test_rho_against_oracle(table, u):
    assert rho(table, u) == pytest.approx(RHO_ORACLE[u], abs=1e-9)


def test_rho_vectorized_matches_scalar(table):
    us = np.array([0.3, 1.0, 1.7, 2.4, 3.9, 11.2])
    vec = rho(table, us)
    assert vec == pytest.approx([rho(table, float(u)) for u in us], abs=0)


def test_rho_domain_errors(table):
    with pytest.raises(DomainError):
        rho(table, -0.01)
    with pytest.raises(DomainError):
        rho(table, table.u_max + 0.5)
    # a few ulps past the end is rounding noise, not an error
    assert rho(table, table.u_max * (1 + 1e-16)) == rho(table, table.u_max)


def test_build_parameter_errors():
    with pytest.raises(ParameterError):
        build_rho_table(u_max=0.5)
    with pytest.raises(ParameterError):
        build_rho_table(step=0.02)
    with pytest.raises(ParameterError):
        build_rho_table(step=0.0)


def test_table_invariants(table):
    vals = table.values
    assert np.all(vals > 0)
    assert np.all(vals <= 1.0)
    j1 = int(math.floor(1.0 / table.step + 1e-9))
    assert np.all(vals[: j1 + 1] == 1.0)
    assert np.all(np.diff(vals) <= 0)


def test_rho_monotone_nonincreasing(table):
    rnd = random.Random(1)
    for _ in range(300):
        u1 = rnd.uniform(0, table.u_max)
        u2 = rnd.uniform(u1, table.u_max)
        assert rho(table, u1) >= rho(table, u2) - 1e-12


def test_recursion_residual_on_random_pairs(table):
    rnd = random.Random(2)
    worst = 0.0
    for _ in range(100):
        u = rnd.uniform(1.0, table.u_max)
        v = rnd.uniform(u - 1.0, u)
        worst = max(worst, abs(recursion_residual(table, u, v)))
    assert worst <= 1e-8


def test_recursion_residual_validates_window(table):
    with pytest.raises(ParameterError):
        recursion_residual(table, 3.0, 1.5)  # v < u - 1


def test_h0_is_one():
    assert h_function(0, 5.0) == 1.0
    assert h_function(0, 0.3) == 1.0


def test_h_vanishes_at_or_below_index():
    assert h_function(2, 1.9) == 0.0
    assert h_function(2, 2.0) == 0.0
    assert h_function(3, 3.0) == 0.0


def test_h1_is_log():
    assert h_function(1, 2.0) == pytest.approx(math.log(2.0), abs=1e-12)
    assert h_function(1, 3.7) == pytest.approx(math.log(3.7), abs=1e-12)


@pytest.mark.parametrize("key", sorted(H_ORACLE))
def test_h_against_oracle(key):
    i, u = key
    assert h_function(i, u) == pytest.approx(H_ORACLE[key], abs=1e-8)


def test_h_parameter_errors():
    with pytest.raises(ParameterError):
        h_function(-1, 2.0)
    with pytest.raises(ParameterError):
        h_function(1, 0.0)


def test_h_nonconvergence_carries_partial():
    cfg = QuadratureConfig(rel_tol=1e-14, abs_tol=1e-15, max_depth=1)
    with pytest.raises(NumericalError) as err:
        h_function(2, 3.5, cfg)
    assert err.value.partial == pytest.approx(H_ORACLE[(2, 3.5)], rel=1e-2)


def test_alternating_sum_trivial_below_one():
    assert rho_via_alternating_sum(0.5) == 1.0


def test_alternating_sum_single_term():
    assert rho_via_alternating_sum(1.5) == pytest.approx(1 - math.log(1.5), abs=1e-10)


@pytest.mark.parametrize("u", [0.5, 1.5, 2.5, 3.5])
def test_alternating_sum_matches_rho(table, u):
    assert abs(rho(table, u) - rho_via_alternating_sum(u)) < 1e-6


def test_quadrature_config_validation():
    with pytest.raises(ParameterError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ParameterError):
        QuadratureConfig(max_depth=0)


def test_small_table_matches_default(table):
    small = build_rho_table(u_max=3.0, step=1e-4)
    for u in (1.3, 2.2, 2.9):
        assert rho(small, u) == pytest.approx(rho(table, u), abs=1e-12)


def test_coarse_step_still_reasonable():
    coarse = build_rho_table(u_max=4.0, step=0.01)
    for u, want in RHO_ORACLE.items():
        if u <= 4.0:
            assert rho(coarse, u) == pytest.approx(want, abs=1e-6)
