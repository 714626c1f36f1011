"""
Preferential Attachment Module.
Growth with fitness under adaptive or deterministic normalisation, phases and limits of the impact measure.
"""
from .core.panetwork import (
    FitnessGraph, NormalizationRule, LogarithmicNormalization, ImpactMeasure, NetworkWave,
    grow_step, simulate, simulate_ensemble, impact_measure,
    phase_classify, fgr_lambda_star, limit_measure, condensate_mass, deterministic_limit_measure,
    upsilon, gamma_estimate, wave_masses, wave_estimate, wave_statistic,
)

__all__ = [
    "FitnessGraph", "NormalizationRule", "LogarithmicNormalization", "ImpactMeasure", "NetworkWave",
    "grow_step", "simulate", "simulate_ensemble", "impact_measure",
    "phase_classify", "fgr_lambda_star", "limit_measure", "condensate_mass", "deterministic_limit_measure",
    "upsilon", "gamma_estimate", "wave_masses", "wave_estimate", "wave_statistic",
]
