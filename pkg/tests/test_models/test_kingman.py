"""Tests for the Kingman selection-mutation model: weights, fitness laws and the wave."""

import math

import numpy as np
import pytest

import condlab as cl
from condlab.analysis import FIT_GRID, PLATEAU_X, fit_gamma_shape
from condlab.distributions import FitnessDistribution, tail_mass, tail_masses
from condlab.exceptions import NoCondensationError, ParameterError
from condlab.kingman import (
    ModelParams, gamma_beta, regime, kernel_total, renewal_system, moment_sum, standing_assumption_ratio,
    weight_sequence, lemma1_constant, lemma1_diagnostic, interval_mass, mass_profile, wave_profile,
    direct_iterate, limit_mass,
)
from tests.helpers import hand_weights, polytail_moment


# ---------------------------------------------------------------------------
# Closed-form constants
# ---------------------------------------------------------------------------

def test_condensate_of_standard_instance(standard_params):
    assert gamma_beta(standard_params) == 0.5
    assert regime(standard_params) == "condensation"
    assert kernel_total(standard_params) == pytest.approx(1.0 / 3.0)


def test_mutation_dominated_regime():
    params = ModelParams(0.6)
    assert gamma_beta(params) == pytest.approx(-0.2)
    assert regime(params) == "no-condensation"
    with pytest.raises(NoCondensationError):
        limit_mass(params, 0.1)
    assert gamma_beta(ModelParams(0.25, FitnessDistribution.polytail(1.0))) == -math.inf


@pytest.mark.parametrize("beta", [0.0, 1.0, -0.1, 1.5])
def test_beta_must_lie_strictly_inside_unit_interval(beta):
    with pytest.raises(ParameterError, match="beta"):
        ModelParams(beta)


def test_moment_sum_identity(standard_params):
    """sum of mutant moments = integral of q/(1-x) = (1/beta)(1 - gamma)."""
    s = moment_sum(standard_params.q)
    assert s.value == pytest.approx(2.0, abs=1e-6)
    assert s.value == pytest.approx((1.0 - gamma_beta(standard_params)) / standard_params.beta, abs=1e-6)
    assert s.tail_bound == pytest.approx(2.0 / 10_001)


def test_standing_assumption_ratio_vanishes(standard_params):
    ratios = [standing_assumption_ratio(standard_params, n) for n in (10, 20, 40)]
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] < 1e-8


# ---------------------------------------------------------------------------
# Tilted weights
# ---------------------------------------------------------------------------

def test_weights_match_hand_recursion(standard_params):
    u = weight_sequence(standard_params, 40)
    expected = hand_weights(0.25, lambda r: polytail_moment(2.0, r), lambda n: 0.5 ** n, 40)
    np.testing.assert_allclose(u.values, expected, rtol=1e-12)
    assert u.u(2) == pytest.approx(0.3055555555555556)


def test_mean_fitness_and_log_weights(standard_params):
    u = weight_sequence(standard_params, 10)
    assert u.mean_fitness(0) == 0.5
    assert u.mean_fitness(1) == pytest.approx(0.375 + 0.25 / 3.0)
    assert u.log_W(5) == pytest.approx(math.log(u.u(5)) + 4 * math.log(0.75))
    assert u.W(1) == pytest.approx(0.5)
    with pytest.raises(ParameterError):
        u.u(11)


def test_renewal_system_is_defective(standard_params):
    system = renewal_system(standard_params)
    assert system.defective
    assert cl.renewal.total_sum(system, 1.0) == pytest.approx(1.5)


def test_weight_asymptotic_constant(standard_params):
    u = weight_sequence(standard_params, 2000)
    assert lemma1_constant(standard_params, u) == pytest.approx(1.5, rel=1e-3)
    diag = lemma1_diagnostic(standard_params, u, [10, 100, 1000])
    assert abs(diag[2] - 1.5) < abs(diag[0] - 1.5)


@pytest.mark.slow
def test_weight_asymptotics_at_ten_thousand(standard_params):
    u = weight_sequence(standard_params, 10_000)
    diag = lemma1_diagnostic(standard_params, u, [1000, 10_000])
    assert abs(diag[1] - 1.5) < 0.05 * 1.5
    assert abs(diag[1] - 1.5) < abs(diag[0] - 1.5)


# ---------------------------------------------------------------------------
# Fitness laws
# ---------------------------------------------------------------------------

def test_mass_is_conserved(standard_params):
    u = weight_sequence(standard_params, 300)
    for n in (1, 2, 10, 100, 300):
        assert interval_mass(standard_params, u, n, 1.0) == pytest.approx(1.0, abs=1e-9)


def test_first_generation_by_hand(standard_params):
    """p_1 = (3/4) delta_{1/2} + (1/4) q."""
    u = weight_sequence(standard_params, 2)
    for h in (0.1, 0.5, 0.6):
        expected = 0.25 * h ** 2 + (0.75 if h > 0.5 else 0.0)
        assert interval_mass(standard_params, u, 1, h) == pytest.approx(expected, abs=1e-14)


def test_profile_is_monotone_in_width(standard_params):
    u = weight_sequence(standard_params, 200)
    masses = mass_profile(standard_params, u, 200, [0.0, 0.01, 0.05, 0.2, 1.0])
    assert masses[0] == 0.0
    assert np.all(np.diff(masses) > 0.0)


def test_generation_must_be_computed(standard_params):
    u = weight_sequence(standard_params, 10)
    with pytest.raises(ParameterError):
        interval_mass(standard_params, u, 11, 0.1)
    with pytest.raises(ParameterError):
        interval_mass(standard_params, u, 0, 0.1)
    with pytest.raises(ParameterError, match="beta"):
        interval_mass(ModelParams(0.3), u, 5, 0.1)


def test_quadrature_tail_path_agrees(standard_params):
    u = weight_sequence(standard_params, 100)
    closed = mass_profile(standard_params, u, 100, [0.05, 0.3])
    with cl.using(tail_method="quadrature"):
        quad = mass_profile(standard_params, u, 100, [0.05, 0.3])
    np.testing.assert_allclose(quad, closed, rtol=1e-9)


def test_direct_iteration_agrees_with_moment_representation(standard_params):
    n = 20
    grid = direct_iterate(standard_params, 10_000, n)
    u = weight_sequence(standard_params, n)
    for h in (0.05, 0.1, 0.3):
        assert tail_mass(grid, h) == pytest.approx(interval_mass(standard_params, u, n, h), abs=1e-3)


def test_direct_iteration_boundary_betas(standard_params):
    pure_mutation = direct_iterate(standard_params, 1000, 5, beta=1.0)
    np.testing.assert_allclose(tail_masses(pure_mutation, [0.1, 0.5]), [0.01, 0.25], atol=1e-12)
    pure_selection = direct_iterate(standard_params, 1000, 5, beta=0.0)
    assert tail_mass(pure_selection, 0.5) == 0.0
    with pytest.raises(ParameterError):
        direct_iterate(standard_params, 50, 5)


@pytest.mark.slow
def test_direct_iteration_acceptance_scale(standard_params):
    grid = direct_iterate(standard_params, 100_000, 50)
    u = weight_sequence(standard_params, 50)
    for h in (0.01, 0.1):
        assert tail_mass(grid, h) == pytest.approx(interval_mass(standard_params, u, 50, h), abs=1e-3)


def test_limit_law(standard_params):
    assert limit_mass(standard_params, 0.25) == pytest.approx(0.625)
    assert limit_mass(standard_params, 1.0) == pytest.approx(1.0)
    assert limit_mass(standard_params, 0.0) == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# Condensation wave
# ---------------------------------------------------------------------------

def test_wave_profile_shape(standard_params):
    wave = wave_profile(standard_params, 500, [0.5, 1.0, 2.0, 4.0])
    assert np.all(np.diff(wave.masses) > 0.0)
    np.testing.assert_allclose(wave.limits, 0.5 * (1.0 - np.exp(-wave.xs) * (1.0 + wave.xs)))
    assert wave.rel_err.shape == (4,)


def test_wave_grid_validation(standard_params):
    with pytest.raises(ParameterError):
        wave_profile(standard_params, 100, [2.0, 1.0])
    with pytest.raises(ParameterError):
        wave_profile(standard_params, 100, [0.0, 1.0])
    with pytest.raises(ParameterError):
        wave_profile(standard_params, 10, [1.0, 20.0])
    with pytest.raises(NoCondensationError):
        wave_profile(ModelParams(0.6), 100, [1.0])


@pytest.mark.slow
def test_wave_converges_to_scaled_gamma(standard_params):
    n = 10_000
    u = weight_sequence(standard_params, n)
    wave = wave_profile(standard_params, n, [0.5, 1.0, 2.0, 4.0], u)
    assert wave.max_rel_err < 0.05
    plateau = wave_profile(standard_params, n, [PLATEAU_X], u).masses[0]
    assert plateau == pytest.approx(0.5, rel=0.02)
    fit = fit_gamma_shape(FIT_GRID, wave_profile(standard_params, n, FIT_GRID, u).masses, plateau=plateau)
    assert 1.85 <= fit.shape <= 2.15


@pytest.mark.slow
def test_wave_masses_form_a_cauchy_sequence(standard_params):
    ns = [500, 1000, 2000, 4000, 8000]
    u = weight_sequence(standard_params, ns[-1])
    masses = np.array([wave_profile(standard_params, n, [1.0, 2.0], u).masses for n in ns])
    steps = np.abs(np.diff(masses, axis=0))
    assert np.all(np.diff(steps, axis=0) < 0.0)
