"""
Cycle-Weighted Permutation Module.
Normalisation constants, exact cycle-type sampling and both edge-wave experiments.
"""
from .core.permutations import (
    CycleWeights, NormalizationSeq, CyclePartitionSample, CycleSampler, MonteCarloEstimate,
    compute_h, fit_h_exponent, cycle_phase, brute_force_h, brute_force_cycle_types,
    first_cycle_marginal, expected_interval_mass, sample_cycles, empirical_measure,
    left_wave_exponent, left_wave_limit, right_wave_limit, giant_cycle_limit,
    left_wave_mc, right_wave_mc,
)

__all__ = [
    "CycleWeights", "NormalizationSeq", "CyclePartitionSample", "CycleSampler", "MonteCarloEstimate",
    "compute_h", "fit_h_exponent", "cycle_phase", "brute_force_h", "brute_force_cycle_types",
    "first_cycle_marginal", "expected_interval_mass", "sample_cycles", "empirical_measure",
    "left_wave_exponent", "left_wave_limit", "right_wave_limit", "giant_cycle_limit",
    "left_wave_mc", "right_wave_mc",
]
