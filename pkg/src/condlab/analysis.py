"""
Wave Analysis Module.
Incomplete gamma comparators, KS distances, gamma-shape fits and ensemble statistics.
"""
from .core.analysis import (
    WaveFit, EnsembleSummary, FIT_GRID, PLATEAU_X,
    regularized_lower_gamma, lower_gamma_series, lower_gamma_continued_fraction, scaled_gamma_cdf,
    ks_distance, fit_gamma_shape, ensemble_summary, within_allowance, categorical_gof, poisson_gof,
)

__all__ = [
    "WaveFit", "EnsembleSummary", "FIT_GRID", "PLATEAU_X",
    "regularized_lower_gamma", "lower_gamma_series", "lower_gamma_continued_fraction", "scaled_gamma_cdf",
    "ks_distance", "fit_gamma_shape", "ensemble_summary", "within_allowance", "categorical_gof", "poisson_gof",
]
