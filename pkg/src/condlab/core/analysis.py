"""
Wave Analysis and Ensemble Statistics.

Special functions and statistics shared by every experiment: the regularized
lower incomplete gamma function (the shape of every condensation wave), KS
distances between profiles, least-squares gamma-shape fits, and the ensemble
summaries and goodness-of-fit checks used by the Monte Carlo modules.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize, special, stats

from .config import get_config
from ..exceptions import ConvergenceError, DegenerateProfileError, ParameterError
from .._typing import ArrayLike, FloatArray

FIT_GRID: FloatArray = np.arange(1, 33, dtype=float) * 0.25
PLATEAU_X = 50.0

_EPS = sys.float_info.epsilon
_TINY = 1e-300
_MAX_ITER = 10_000

# =========================================================================
# INCOMPLETE GAMMA
# =========================================================================

def lower_gamma_series(a: float, x: float) -> float:
    """P(a, x) from the power series Σ x^k / ((a+1)⋯(a+k)); converges for every x, fast for x < a + 1."""
    if x == 0.0:
        return 0.0
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - special.gammaln(a))
    raise ConvergenceError(f"incomplete gamma series did not converge for a={a!r}, x={x!r}")

def lower_gamma_continued_fraction(a: float, x: float) -> float:
    """P(a, x) = 1 - Q(a, x), with Q from the modified Lentz continued fraction (valid for x > 0)."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return 1.0 - math.exp(-x + a * math.log(x) - special.gammaln(a)) * h
    raise ConvergenceError(f"incomplete gamma continued fraction did not converge for a={a!r}, x={x!r}")

def _lower_gamma_scalar(a: float, x: float) -> float:
    if math.isnan(x):
        return math.nan
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, lower_gamma_series(a, x))
    return min(1.0, max(0.0, lower_gamma_continued_fraction(a, x)))

def regularized_lower_gamma(a: float, x: ArrayLike) -> float | FloatArray:
    """
    P(a, x) = Γ(a)^{-1} ∫_0^x y^{a-1} e^{-y} dy.

    Uses the power series below x = a + 1 and the continued fraction above it;
    absolute error below 1e-12. Accepts a scalar or an array of x.

    Examples:
        >>> round(regularized_lower_gamma(2.0, 1.0), 10)
        0.2642411177
        >>> regularized_lower_gamma(1.0, 0.0)
        0.0
    """
    a = float(a)
    if not a > 0.0:
        raise ParameterError("a", a, "gamma shape must be positive")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise ParameterError("x", x, "must be nonnegative")
    if arr.ndim == 0:
        return _lower_gamma_scalar(a, float(arr))
    return np.array([_lower_gamma_scalar(a, float(v)) for v in arr.ravel()]).reshape(arr.shape)

def scaled_gamma_cdf(scale: float, a: float, xs: ArrayLike) -> FloatArray:
    """The wave comparator scale·P(a, x) on a grid."""
    return scale * np.atleast_1d(regularized_lower_gamma(a, xs))

# =========================================================================
# PROFILE COMPARISON AND FITTING
# =========================================================================

@dataclass(frozen=True)
class WaveFit:
    """A least-squares gamma-shape fit of a normalised wave profile."""
    shape: float
    mass: float
    ks: float
    grid: FloatArray

def _check_monotone(values: FloatArray, what: str, tol: float = 1e-12) -> None:
    if values.size > 1 and np.any(np.diff(values) < -tol):
        raise DegenerateProfileError(f"{what} must be nondecreasing along the grid")

def ks_distance(
    empirical: ArrayLike,
    model: ArrayLike | Callable[[FloatArray], FloatArray],
    grid: ArrayLike | None = None,
) -> float:
    """
    Sup-distance between a nondecreasing empirical profile and a model on a shared grid.

    ``model`` may be an array of the same length or a callable evaluated on ``grid``.

    Raises:
        DegenerateProfileError: If the empirical profile decreases anywhere.
    """
    emp = np.asarray(empirical, dtype=float)
    _check_monotone(emp, "empirical profile")
    if callable(model):
        if grid is None:
            raise ParameterError("grid", None, "a callable model needs the evaluation grid")
        ref = np.asarray(model(np.asarray(grid, dtype=float)), dtype=float)
    else:
        ref = np.asarray(model, dtype=float)
    if ref.shape != emp.shape:
        raise ParameterError("model", ref.shape, f"shape must match the empirical profile {emp.shape}")
    return float(np.max(np.abs(emp - ref))) if emp.size else 0.0

def fit_gamma_shape(
    xs: ArrayLike,
    masses: ArrayLike,
    plateau: float | None = None,
    initial_shape: float = 1.5,
) -> WaveFit:
    """
    Fits the gamma shape α̂ of a wave profile.

    The profile is divided by its plateau (the mass far right of the wave; by default
    the last value), and α̂ minimises Σ (P(α, x_i) - profile_i / plateau)² over the grid.
    The returned KS distance compares the normalised profile with P(α̂, ·).

    Raises:
        DegenerateProfileError: For a non-positive plateau or a decreasing profile.
    """
    grid = np.asarray(xs, dtype=float)
    values = np.asarray(masses, dtype=float)
    if grid.shape != values.shape or grid.size < 2:
        raise ParameterError("xs", grid.shape, "need at least two grid points matching the masses")
    _check_monotone(values, "wave profile")
    level = float(values[-1] if plateau is None else plateau)
    if not (level > 0.0 and math.isfinite(level)):
        raise DegenerateProfileError(f"wave plateau {level!r} must be positive")

    target = values / level

    def residual(theta: FloatArray) -> FloatArray:
        return special.gammainc(theta[0], grid) - target

    result = optimize.least_squares(
        residual, x0=[initial_shape], bounds=([1e-3], [1e3]), xtol=1e-15, ftol=1e-15, gtol=1e-15
    )
    shape = float(result.x[0])
    fitted = np.asarray(regularized_lower_gamma(shape, grid), dtype=float)
    return WaveFit(shape=shape, mass=level, ks=float(np.max(np.abs(target - fitted))), grid=grid)

# =========================================================================
# ENSEMBLE STATISTICS
# =========================================================================

@dataclass(frozen=True)
class EnsembleSummary:
    mean: FloatArray
    stderr: FloatArray
    count: int

def ensemble_summary(samples: ArrayLike) -> EnsembleSummary:
    """
    Column-wise mean and standard error of a (replicas × points) array.

    Uses compensated summation so that the result does not depend on how the replicas
    were partitioned between workers.
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    n = data.shape[0]
    if n == 0:
        raise ParameterError("samples", "empty", "need at least one replica")
    mean = np.array([math.fsum(col) / n for col in data.T.tolist()])
    if n > 1:
        var = np.array([math.fsum(((c - m) ** 2).tolist()) / (n - 1) for c, m in zip(data.T, mean)])
        se = np.sqrt(var / n)
    else:
        se = np.full(mean.shape, math.nan)
    return EnsembleSummary(mean=mean, stderr=se, count=n)

def within_allowance(estimate: float, stderr: float, target: float, rel: float = 0.1) -> bool:
    """Acceptance rule |estimate - target| ≤ max(3·SE, rel·|target|)."""
    se = 0.0 if math.isnan(stderr) else stderr
    return abs(estimate - target) <= max(3.0 * se, rel * abs(target))

def _pool_small_bins(observed: FloatArray, expected: FloatArray, minimum: float = 5.0) -> tuple[FloatArray, FloatArray]:
    # Merge adjacent bins left to right until every pooled expectation reaches the minimum.
    obs_out: list[float] = []
    exp_out: list[float] = []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= minimum:
            obs_out.append(acc_o)
            exp_out.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0.0 or acc_o > 0.0:
        if exp_out:
            obs_out[-1] += acc_o
            exp_out[-1] += acc_e
        else:
            obs_out.append(acc_o)
            exp_out.append(acc_e)
    return np.array(obs_out), np.array(exp_out)

def categorical_gof(counts: ArrayLike, probs: ArrayLike) -> float:
    """
    Chi-square p-value of observed category counts against probabilities, pooling
    categories whose expected count is below five.
    """
    obs = np.asarray(counts, dtype=float)
    p = np.asarray(probs, dtype=float)
    if obs.shape != p.shape:
        raise ParameterError("probs", p.shape, "must match the counts")
    if abs(p.sum() - 1.0) > float(get_config("rtol")):
        raise ParameterError("probs", float(p.sum()), "probabilities must sum to 1")
    o, e = _pool_small_bins(obs, p * obs.sum())
    if o.size < 2:
        return 1.0
    e = e * (o.sum() / e.sum())
    return float(stats.chisquare(o, e).pvalue)

def poisson_gof(samples: ArrayLike, lam: float) -> float:
    """Chi-square p-value of integer samples against Poisson(lam), with an open top bin."""
    data = np.asarray(samples, dtype=np.int64)
    if data.size == 0 or np.any(data < 0):
        raise ParameterError("samples", "...", "need nonnegative integer counts")
    top = int(max(data.max(), stats.poisson.ppf(1.0 - 1e-12, lam))) + 1
    observed = np.bincount(np.minimum(data, top), minlength=top + 1).astype(float)
    probs = stats.poisson.pmf(np.arange(top + 1), lam)
    probs[-1] = stats.poisson.sf(top - 1, lam)
    return categorical_gof(observed, probs / probs.sum())
