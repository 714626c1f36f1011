"""
condlab: A Numerical Laboratory for Condensation Waves
-----------------

condlab computes, simulates and compares the "condensation wave" that appears at the
edge of a condensate in three related stochastic systems. Every quantity the theory
predicts in closed form is available as an oracle, and every random experiment is
reproducible from a single master seed.

Core Architecture
-----------------
#### Fitness Distributions (condlab.distributions)
    Laws on [0, 1] with an exact polynomial tail near 1, point masses and weighted
    grids. Moments, tail masses and tail power integrals come from closed forms
    (beta functions), with a Gauss-Legendre path kept as a cross-check.

#### Renewal Engine (condlab.renewal)
    A direct solver for defective discrete renewal equations, certified truncation
    of slowly converging series and the Malthusian tilt of a summable kernel.

#### Kingman Selection-Mutation (condlab.kingman)
    Exact fitness laws of the house-of-cards model with selection, the tilted weight
    sequence, the condensate mass and the gamma-shaped wave in the rescaled window
    below fitness 1. A brute-force iteration of the recursion on a grid confirms the
    closed forms independently.

#### Weighted Permutations (condlab.permutations)
    Normalisation constants of cycle-weighted random permutations, exact cycle-type
    sampling and Monte Carlo estimates of the left and right edge waves.
    Dependency Note:
        Parallel replicas use joblib (a core dependency); `workers=1` runs in-process.

#### Fitness Networks (condlab.network)
    Preferential attachment with fitness under adaptive or deterministic
    normalisation: growth, phase classification, limit measures and the wave.

#### Wave Analysis (condlab.analysis)
    Regularised incomplete gamma comparators, Kolmogorov-Smirnov distances,
    gamma-shape fits and ensemble statistics with standard errors.

#### Tables, Manifests & Plots (condlab.save, condlab.load, condlab.peek, condlab.plot_table)
    Canonical CSV/JSON result tables and run manifests carrying SHA-256 checksums
    of every output, so `condlab verify` can replay a run byte for byte.
    Dependency Note:
        SVG plots require matplotlib.
        Install via: `pip install 'condlab[plot]'`
"""

from .core.config import config, using, reset_config
from .core.distributions import FitnessDistribution, PointMeasure, parse_distribution
from .core.kingman import ModelParams, gamma_beta
from .core.table import ResultTable
from .core.io import load, save, peek
from .core.plotting import plot_table

from . import distributions
from . import renewal
from . import kingman
from . import permutations
from . import network
from . import analysis
from . import random
from . import exceptions

__version__ = "0.1.0"

__all__ = [
    "config",
    "using",
    "reset_config",
    "FitnessDistribution",
    "PointMeasure",
    "parse_distribution",
    "ModelParams",
    "gamma_beta",
    "ResultTable",
    "load",
    "save",
    "peek",
    "plot_table",
    "distributions",
    "renewal",
    "kingman",
    "permutations",
    "network",
    "analysis",
    "random",
    "exceptions"
]
