"""
Kingman Selection-Mutation Module.
Exact fitness laws, tilted weights, the condensate mass γ(β) and the gamma-shaped wave.
"""
from .core.kingman import (
    ModelParams, TiltedWeightSequence, WaveProfile,
    gamma_beta, regime, kernel_total, renewal_system, moment_sum, standing_assumption_ratio,
    weight_sequence, lemma1_constant, lemma1_diagnostic,
    interval_mass, mass_profile, wave_profile, direct_iterate, limit_mass,
)

__all__ = [
    "ModelParams", "TiltedWeightSequence", "WaveProfile",
    "gamma_beta", "regime", "kernel_total", "renewal_system", "moment_sum", "standing_assumption_ratio",
    "weight_sequence", "lemma1_constant", "lemma1_diagnostic",
    "interval_mass", "mass_profile", "wave_profile", "direct_iterate", "limit_mass",
]
