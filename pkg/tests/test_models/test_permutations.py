"""Tests for cycle-weighted random permutations: normalisation, exact sampling and edge waves."""

import math
from collections import Counter

import numpy as np
import pytest
from scipy import special

import condlab as cl
from condlab.analysis import categorical_gof, within_allowance
from condlab.exceptions import ParameterError, WeightNormalizationError
from condlab.permutations import (
    CycleWeights, NormalizationSeq, CyclePartitionSample, CycleSampler, compute_h, fit_h_exponent, cycle_phase,
    brute_force_h, brute_force_cycle_types, first_cycle_marginal, expected_interval_mass, sample_cycles,
    empirical_measure, left_wave_exponent, left_wave_limit, right_wave_limit, giant_cycle_limit,
    left_wave_mc, right_wave_mc,
)
from condlab.random import stream
from tests.helpers import enumerate_first_cycle


# ---------------------------------------------------------------------------
# Normalisation constants
# ---------------------------------------------------------------------------

def test_uniform_permutations_have_unit_constants():
    np.testing.assert_allclose(compute_h(CycleWeights.power(0.0), 50).values, np.ones(51), rtol=1e-12)


def test_constant_weights_give_rising_factorials():
    h = compute_h(CycleWeights.constant(2.0, 30), 30)
    np.testing.assert_allclose(h.values, np.arange(1, 32), rtol=1e-12)


@pytest.mark.parametrize("gamma_p", [-1.0, 0.0, 0.5, 1.0, 2.0])
def test_constants_match_enumeration(gamma_p):
    w = CycleWeights.power(gamma_p)
    h = compute_h(w, 7)
    for n in range(1, 8):
        assert h(np.array([n]))[0] == pytest.approx(brute_force_h(w, n), rel=1e-12)


def test_large_weights_stay_finite():
    h = compute_h(CycleWeights.power(3.0), 400)
    assert np.all(np.isfinite(h.log_h))
    assert h.log_h[0] == h.log_h[1] == 0.0
    assert np.all(np.diff(h.log_h[1:]) > 0.0)


def test_enumeration_is_limited():
    with pytest.raises(ParameterError):
        brute_force_h(CycleWeights.power(0.0), 9)


def test_weights_preconditions():
    with pytest.raises(ParameterError):
        CycleWeights()
    with pytest.raises(ParameterError):
        CycleWeights.explicit([1.0, -1.0])
    with pytest.raises(ParameterError):
        compute_h(CycleWeights.power(0.0), 5)(np.array([6]))


def test_subexponential_exponent():
    h = compute_h(CycleWeights.power(-1.0), 2000)
    assert fit_h_exponent(h, 500, 2000) == pytest.approx(-2.0, abs=0.05)


def test_cycle_phase():
    assert cycle_phase(1.0) == "left"
    assert cycle_phase(0.0) == "bulk"
    assert cycle_phase(-0.5) == "right"

# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def test_first_cycle_marginal_matches_enumeration():
    w = CycleWeights.power(1.0)
    h = compute_h(w, 6)
    marginal = first_cycle_marginal(w, h, 6)
    np.testing.assert_allclose(marginal, enumerate_first_cycle(lambda l: float(l), 6), rtol=1e-12)
    assert math.fsum(marginal) == pytest.approx(1.0, abs=1e-14)


def test_sampled_first_cycle_law():
    w = CycleWeights.power(1.0)
    h = compute_h(w, 7)
    sampler = CycleSampler(w, h, 7)
    rng = stream(101, 0)
    firsts = Counter(sampler.sample(rng).draw_order[0] for _ in range(20_000))
    counts = np.array([firsts.get(j, 0) for j in range(1, 8)])
    assert categorical_gof(counts, first_cycle_marginal(w, h, 7)) > 1e-3


def test_sampled_cycle_types_match_enumeration():
    w = CycleWeights.power(-1.0)
    h = compute_h(w, 5)
    exact = brute_force_cycle_types(w, 5)
    sampler = CycleSampler(w, h, 5)
    rng = stream(202, 0)
    seen = Counter(sampler.sample(rng).lengths for _ in range(20_000))
    types = list(exact)
    assert categorical_gof([seen.get(t, 0) for t in types], [exact[t] for t in types]) > 1e-3


def test_sample_structure():
    w = CycleWeights.power(0.5)
    s = sample_cycles(w, compute_h(w, 300), 300, stream(1, 4), stream=4)
    assert sum(s.lengths) == 300
    assert list(s.lengths) == sorted(s.lengths, reverse=True)
    assert sorted(s.draw_order) == sorted(s.lengths)
    assert s.stream == 4
    assert empirical_measure(s).total == pytest.approx(1.0)
    assert s.window_mass(1, 300) == pytest.approx(1.0)


def test_cycle_counts_and_empirical_atoms():
    s = CyclePartitionSample((3, 2, 1), 6)
    assert s.cycle_counts == {1: 1, 2: 1, 3: 1}
    assert s.window_mass(2, 3) == pytest.approx(5.0 / 6.0)
    measure = empirical_measure(CyclePartitionSample((2, 2, 1, 1), 6))
    np.testing.assert_allclose(measure.atoms, [1 / 6, 2 / 6])
    np.testing.assert_allclose(measure.weights, [2 / 6, 4 / 6])


def test_corrupted_constants_are_detected():
    good = compute_h(CycleWeights.power(0.0), 10)
    log_h = good.log_h.copy()
    log_h[10] = math.log(2.0)
    bad = NormalizationSeq(log_h=log_h)
    with pytest.raises(WeightNormalizationError):
        sample_cycles(CycleWeights.power(0.0), bad, 10, stream(0, 0))


def test_corruption_below_the_top_size_is_detected_by_default():
    w = CycleWeights.power(1.0)
    log_h = compute_h(w, 50).log_h.copy()
    log_h[10] = math.log(0.5)
    bad = NormalizationSeq(log_h=log_h)
    sampler = CycleSampler(w, bad, 50)
    for r in range(20):
        with pytest.raises(WeightNormalizationError):
            sampler.sample(stream(3, r))


def test_weight_verification_consumes_no_randomness():
    w = CycleWeights.power(-0.5)
    h = compute_h(w, 300)
    checked = [CycleSampler(w, h, 300).sample(stream(5, r)).lengths for r in range(10)]
    with cl.using(strict_weights=False):
        unchecked = [CycleSampler(w, h, 300).sample(stream(5, r)).lengths for r in range(10)]
    assert checked == unchecked

# ---------------------------------------------------------------------------
# Edge waves
# ---------------------------------------------------------------------------

def test_left_wave_limit_values():
    assert left_wave_exponent(1.0) == 0.5
    assert left_wave_limit(1.0, 1.0) == pytest.approx(1.0 - 2.0 / math.e)
    with pytest.raises(ParameterError):
        left_wave_limit(0.0, 1.0)


def test_right_wave_comparator_properties():
    w = CycleWeights.power(-1.0)
    h = compute_h(w, 4096)
    values = [right_wave_limit(w, m, h) for m in (0, 1, 2, 5, 20, 200)]
    assert values[0] == 0.5
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] <= 1.0 + 1e-12


def test_giant_cycle_law():
    w = CycleWeights.power(-1.0)
    assert giant_cycle_limit(w, 0) == pytest.approx(math.exp(-special.zeta(2.0)))
    h = compute_h(w, 4000)
    for m in (0, 5):
        exact = expected_interval_mass(w, h, 4000, 4000 - m, 4000)
        assert exact == pytest.approx(giant_cycle_limit(w, m, h), rel=1e-2)
    with pytest.raises(ParameterError):
        giant_cycle_limit(CycleWeights.power(1.0), 3)


def test_left_wave_monte_carlo_tracks_exact_expectation():
    est = left_wave_mc(CycleWeights.power(1.0), 400, [1.0, 2.0], replicas=200, seed=3)
    assert est.seed == 3 and est.replicas == 200
    for mean, se, exact in zip(est.mean, est.stderr, est.exact):
        assert within_allowance(mean, se, exact)
    np.testing.assert_allclose(est.comparator, left_wave_limit(1.0, np.array([1.0, 2.0])))


def test_monte_carlo_does_not_depend_on_workers():
    w = CycleWeights.power(1.0)
    one = left_wave_mc(w, 200, [1.0], replicas=12, seed=8, workers=1)
    two = left_wave_mc(w, 200, [1.0], replicas=12, seed=8, workers=2)
    np.testing.assert_array_equal(one.mean, two.mean)
    np.testing.assert_array_equal(one.stderr, two.stderr)


def test_right_wave_monte_carlo_tracks_exact_expectation():
    est = right_wave_mc(CycleWeights.power(-1.0), 500, [0, 2, 5], replicas=300, seed=4)
    assert est.comparator[0] == 0.5
    for mean, se, exact in zip(est.mean, est.stderr, est.exact):
        assert within_allowance(mean, se, exact)
    with pytest.raises(ParameterError):
        right_wave_mc(CycleWeights.power(1.0), 500, [0], replicas=2)


@pytest.mark.slow
def test_left_wave_acceptance():
    est = left_wave_mc(CycleWeights.power(1.0), 10_000, [1.0], replicas=10_000, seed=1)
    assert within_allowance(est.mean[0], est.stderr[0], 1.0 - 2.0 / math.e)


@pytest.mark.slow
def test_right_wave_acceptance():
    w = CycleWeights.power(-1.0)
    est = right_wave_mc(w, 20_000, [5], replicas=2000, seed=2)
    assert within_allowance(est.mean[0], est.stderr[0], est.exact[0])
    assert within_allowance(est.mean[0], est.stderr[0], giant_cycle_limit(w, 5))
