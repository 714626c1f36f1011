"""
Fitness Distribution Module.
Closed-form oracles (moments, tail masses, tail power integrals) for laws on [0, 1].
"""
from .core.distributions import (
    FitnessDistribution, PointMeasure, parse_distribution,
    moment, moments, moments_at, tail_mass, tail_masses,
    tail_power_integral, tail_power_integrals, quadrature_self_check,
    reciprocal_gap_integral, reciprocal_gap_tail, shifted_reciprocal_mass,
    moment_tail, sample, discretize,
)

__all__ = [
    "FitnessDistribution", "PointMeasure", "parse_distribution",
    "moment", "moments", "moments_at", "tail_mass", "tail_masses",
    "tail_power_integral", "tail_power_integrals", "quadrature_self_check",
    "reciprocal_gap_integral", "reciprocal_gap_tail", "shifted_reciprocal_mass",
    "moment_tail", "sample", "discretize",
]
