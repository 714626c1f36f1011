"""
Kingman Selection-Mutation Model.

The population fitness law evolves on [0,1] by

    p_{n+1}(dx) = (1-β) w_n^{-1} x p_n(dx) + β q(dx),    w_n = ∫ x p_n(dx).

Instead of iterating measures, p_n is computed exactly from its moment
representation through the tilted weight sequence u_n = W_n (1-β)^{1-n}, which
solves a defective renewal equation and stays in normal floating range for
every generation (W_n itself decays like (1-β)^n and underflows).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special

from . import distributions as dist
from .analysis import regularized_lower_gamma
from .config import get_config
from .distributions import FitnessDistribution
from .renewal import RenewalSystem, SeriesSum, solve
from ..exceptions import DegenerateMeasureError, NoCondensationError, ParameterError
from .._typing import ArrayLike, FloatArray, IntArray, KingmanRegime


@dataclass(frozen=True)
class ModelParams:
    """
    Parameters of the selection-mutation model.

    Attributes:
        beta: Mutation probability, strictly between 0 and 1.
        q: Mutant fitness law (defaults to the polynomial tail with α = 2).
        p0: Initial fitness law (defaults to the point mass at 1/2).
    """
    beta: float
    q: FitnessDistribution = field(default_factory=lambda: FitnessDistribution.polytail(2.0))
    p0: FitnessDistribution = field(default_factory=lambda: FitnessDistribution.point(0.5))

    def __post_init__(self) -> None:
        if not (0.0 < self.beta < 1.0):
            raise ParameterError("beta", self.beta, "mutation probability must lie strictly between 0 and 1")

    @classmethod
    def standard(cls) -> ModelParams:
        """α = 2, β = 1/4, p₀ = δ_{1/2}: the reference instance with γ(β) = 1/2."""
        return cls(0.25)

    @property
    def alpha(self) -> float:
        if self.q.kind != "polytail":
            raise ParameterError("q", self.q, "a tail exponent is only defined for the polynomial-tail family")
        return float(self.q.alpha)  # type: ignore[arg-type]


@dataclass(frozen=True)
class TiltedWeightSequence:
    """
    The tilted normalisation constants u_1, ..., u_N of the model (``values[k-1] == u_k``).

    W_n is never stored: it is recovered in log-space through
    log W_n = log u_n + (n-1)·log(1-β).
    """
    values: FloatArray
    beta: float

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def u(self, n: int) -> float:
        self._check(n)
        return float(self.values[n - 1])

    def log_W(self, n: int) -> float:
        self._check(n)
        return math.log(self.values[n - 1]) + (n - 1) * math.log1p(-self.beta)

    def W(self, n: int) -> float:
        return math.exp(self.log_W(n))

    def mean_fitness(self, n: int) -> float:
        """w_n = W_{n+1}/W_n for n ≥ 1, and w_0 = W_1 = ∫ x p₀(dx)."""
        if n == 0:
            return self.u(1)
        self._check(n + 1)
        return (1.0 - self.beta) * float(self.values[n]) / float(self.values[n - 1])

    def partial_sum(self) -> float:
        return math.fsum(self.values.tolist())

    def _check(self, n: int) -> None:
        if not (1 <= n <= len(self)):
            raise ParameterError("n", n, f"generation must lie in [1, {len(self)}]")


@dataclass(frozen=True)
class WaveProfile:
    """Wave masses p_n(1 - x/n, 1] over a grid of x, next to the gamma limit γ(β)·P(α, x)."""
    n: int
    xs: FloatArray
    masses: FloatArray
    limits: FloatArray

    @property
    def rel_err(self) -> FloatArray:
        return np.abs(self.masses - self.limits) / self.limits

    @property
    def max_rel_err(self) -> float:
        return float(np.max(self.rel_err))

# =========================================================================
# CLOSED-FORM CONSTANTS
# =========================================================================

def gamma_beta(params: ModelParams) -> float:
    """
    γ(β) = 1 - β ∫ q(dx)/(1-x), the mass of the condensate; ``-inf`` when the integral diverges.

    Examples:
        >>> gamma_beta(ModelParams(0.25))
        0.5
    """
    gap = dist.reciprocal_gap_integral(params.q)
    return -math.inf if math.isinf(gap) else 1.0 - params.beta * gap

def regime(params: ModelParams) -> KingmanRegime:
    return "condensation" if gamma_beta(params) > 0.0 else "no-condensation"

def _require_condensation(params: ModelParams, context: str) -> float:
    g = gamma_beta(params)
    if not g > 0.0:
        raise NoCondensationError(g, context)
    return g

def kernel_total(params: ModelParams) -> float:
    """Σ_{r≥1} (β/(1-β)) μ_r = (β/(1-β)) (∫ q(dx)/(1-x) - 1)."""
    gap = dist.reciprocal_gap_integral(params.q)
    return math.inf if math.isinf(gap) else params.beta / (1.0 - params.beta) * (gap - 1.0)

def renewal_system(params: ModelParams) -> RenewalSystem:
    """The renewal equation u_n = (β/(1-β)) Σ_{r=1}^{n-1} μ_r u_{n-r} + m_n."""
    ratio = params.beta / (1.0 - params.beta)
    q, p0 = params.q, params.p0

    def kernel(r: IntArray) -> FloatArray:
        return ratio * dist.moments_at(q, r)

    def forcing(n: IntArray) -> FloatArray:
        return dist.moments_at(p0, n)

    return RenewalSystem(kernel=kernel, forcing=forcing, kernel_total=kernel_total(params))

def moment_sum(d: FitnessDistribution, n_terms: int = 10_000) -> SeriesSum:
    """
    Σ_{n≥0} ∫x^n d(dx): the first ``n_terms`` moments summed explicitly, plus the
    closed-form remainder Σ_{n≥N} μ_n (reported as ``tail_bound``).
    """
    if n_terms < 1:
        raise ParameterError("n_terms", n_terms, "need at least one term")
    head = math.fsum(dist.moments(d, n_terms - 1).tolist())
    tail = dist.moment_tail(d, n_terms)
    return SeriesSum(value=head + tail, terms=n_terms, tail_bound=tail)

def standing_assumption_ratio(params: ModelParams, n: int) -> float:
    """m_n / μ_n, which must vanish as n grows for the initial law to be forgotten."""
    return dist.moment(params.p0, n) / dist.moment(params.q, n)

# =========================================================================
# TILTED WEIGHTS
# =========================================================================

def weight_sequence(params: ModelParams, n_max: int) -> TiltedWeightSequence:
    """
    Computes u_1, ..., u_N by solving the model's renewal equation.

    Examples:
        >>> u = weight_sequence(ModelParams(0.25), 2)
        >>> round(u.u(2), 7)
        0.3055556
    """
    return TiltedWeightSequence(values=solve(renewal_system(params), n_max), beta=params.beta)

def lemma1_constant(params: ModelParams, u: TiltedWeightSequence) -> float:
    """
    The constant c of the asymptotics W_n ~ c n^{-α} (1-β)^{n-1}, i.e. u_n ~ c n^{-α}:

        c = (β/γ(β)) Γ(α+1) Σ_{k≥1} u_k.

    Terms beyond the computed length are estimated as u_N (N/k)^α and summed with the
    Hurwitz zeta function.
    """
    g = _require_condensation(params, "Asymptotic constant")
    a = params.alpha
    n = len(u)
    tail = float(u.values[-1]) * n ** a * float(special.zeta(a, n + 1))
    return params.beta / g * math.exp(special.gammaln(a + 1.0)) * (u.partial_sum() + tail)

def lemma1_diagnostic(params: ModelParams, u: TiltedWeightSequence, ns: ArrayLike | None = None) -> FloatArray:
    """u_n · n^α at the requested generations (all by default); approaches the constant c."""
    a = params.alpha
    idx = np.arange(1, len(u) + 1) if ns is None else np.asarray(ns, dtype=np.int64)
    if np.any(idx < 1) or np.any(idx > len(u)):
        raise ParameterError("ns", "...", f"generations must lie in [1, {len(u)}]")
    return u.values[idx - 1] * np.power(idx.astype(float), a)

# =========================================================================
# FITNESS LAWS
# =========================================================================

@lru_cache(maxsize=256)
def _tail_table(d: FitnessDistribution, n: int, h: float, method: str) -> FloatArray:
    table = dist.tail_power_integrals(d, np.arange(n), h, method)  # type: ignore[arg-type]
    table.setflags(write=False)
    return table

def _check_generation(u: TiltedWeightSequence, n: int) -> None:
    if n == 0:
        raise ParameterError("n", n, "generation 0 is p0 itself; use distributions.tail_mass(params.p0, h)")
    if not (1 <= n <= len(u)):
        raise ParameterError("n", n, f"generation must lie in [1, {len(u)}] for the computed weights")

def interval_mass(params: ModelParams, u: TiltedWeightSequence, n: int, h: float) -> float:
    """
    p_n(1-h, 1] from the moment representation, in tilted form:

        p_n(1-h,1] = Σ_{r=0}^{n-1} β (u_{n-r}/u_n) ∫_{1-h}^1 y^r q(dy) + ((1-β)/u_n) ∫_{1-h}^1 y^n p₀(dy)

    The r = 0 ratio is exactly 1. Tail tables for (q, n, h) are memoised.
    """
    return float(mass_profile(params, u, n, [h])[0])

def mass_profile(params: ModelParams, u: TiltedWeightSequence, n: int, hs: ArrayLike) -> FloatArray:
    """Vectorised `interval_mass` over several tail widths at one generation."""
    _check_generation(u, n)
    if u.beta != params.beta:
        raise ParameterError("u", u.beta, f"weights were computed for beta={u.beta!r}, not {params.beta!r}")
    widths = np.atleast_1d(np.asarray(hs, dtype=float))
    if np.any(widths < 0.0) or np.any(widths > 1.0):
        raise ParameterError("h", "...", "tail widths must lie in [0, 1]")

    method = str(get_config("tail_method"))
    u_n = float(u.values[n - 1])
    ratios = u.values[n - 1::-1] / u_n
    ratios[0] = 1.0
    beta = params.beta

    out = np.empty(widths.shape[0], dtype=float)
    for i, h in enumerate(widths):
        table = _tail_table(params.q, n, float(h), method)
        initial = dist.tail_power_integral(params.p0, n, float(h), method)  # type: ignore[arg-type]
        out[i] = beta * float(np.dot(ratios, table)) + (1.0 - beta) / u_n * initial
    return out

def wave_profile(
    params: ModelParams,
    n: int,
    xs: ArrayLike,
    u: TiltedWeightSequence | None = None,
) -> WaveProfile:
    """
    The condensation wave p_n(1 - x/n, 1] on a grid of x, with its gamma limit.

    Raises:
        NoCondensationError: If γ(β) ≤ 0.
        ParameterError: If the grid is not strictly increasing, positive and at most n.
    """
    g = _require_condensation(params, "wave profile")
    grid = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(grid <= 0.0) or np.any(np.diff(grid) <= 0.0):
        raise ParameterError("xs", "...", "wave coordinates must be positive and strictly increasing")
    if np.any(grid > n):
        raise ParameterError("xs", float(grid.max()), f"wave coordinates cannot exceed n={n}")
    if u is None:
        u = weight_sequence(params, n)
    masses = mass_profile(params, u, n, grid / n)
    limits = g * np.asarray(regularized_lower_gamma(params.alpha, grid), dtype=float)
    return WaveProfile(n=n, xs=grid, masses=masses, limits=limits)

def direct_iterate(
    params: ModelParams,
    bins: int,
    n: int,
    *,
    beta: float | None = None,
) -> FitnessDistribution:
    """
    Iterates the defining recursion literally on the cell centres (i + 1/2)/G.

    ``beta`` overrides ``params.beta`` and, unlike the model parameters, may take the
    boundary values 0 (pure selection) and 1 (pure mutation).

    Raises:
        DegenerateMeasureError: If the mean fitness vanishes.
    """
    if bins < 100:
        raise ParameterError("G", bins, "grid needs at least 100 cells")
    if n < 0:
        raise ParameterError("n", n, "generation must be nonnegative")
    b = params.beta if beta is None else float(beta)
    if not (0.0 <= b <= 1.0):
        raise ParameterError("beta", b, "must lie in [0, 1]")

    q_grid = dist.discretize(params.q, bins)
    x, qw = q_grid._arrays
    _, p = dist.discretize(params.p0, bins)._arrays
    p = p.copy()
    for step in range(n):
        w = float(np.dot(x, p))
        if not w > 0.0:
            raise DegenerateMeasureError(f"mean fitness vanished at generation {step}")
        p = (1.0 - b) * (x * p) / w + b * qw
    return FitnessDistribution.grid(x, p)

def limit_mass(params: ModelParams, h: float) -> float:
    """
    p(1-h, 1] for the limit p(dx) = β q(dx)/(1-x) + γ(β) δ₁(dx).

    Examples:
        >>> limit_mass(ModelParams(0.25), 0.25)
        0.625
    """
    g = _require_condensation(params, "limit law")
    return params.beta * dist.reciprocal_gap_tail(params.q, h) + g
