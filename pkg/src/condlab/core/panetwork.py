"""
Preferential Attachment with Fitness.

A directed network grows one vertex at a time. Given the graph on n vertices, the
new vertex n+1 receives a fitness F_{n+1} ~ q and links to every old vertex m an
independent Poisson(F_m imp_n(m) / (n Z_n)) number of times, where the impact
imp_n(m) is indegree + 1. The normalisation Z_n is either adaptive,
Z_n = (λn)^{-1} Σ_m F_m imp_n(m), or a deterministic sequence.

Only fitnesses and impacts are stored: every statistic of interest is a function
of the impact measure Ξ_n = n^{-1} Σ_m imp_n(m) δ_{F_m}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Any, Callable

import numpy as np
from scipy import optimize, special

from . import distributions as dist
from .analysis import WaveFit, ensemble_summary, fit_gamma_shape, regularized_lower_gamma
from .config import get_config
from .distributions import FitnessDistribution, PointMeasure
from .random import resolve_seed, run_replicas, stream
from ..exceptions import DegenerateMeasureError, DegenerateProfileError, ParameterError, PhaseError
from .._typing import ArrayLike, FloatArray, IntArray, NetworkPhase, NormalizationMode, NormalizationOracle

_MAX_REJECTIONS = 1_000_000


@dataclass(frozen=True)
class LogarithmicNormalization:
    """
    Z_k = 1 - α / log(k + e^{2α}).

    Satisfies 1 - Z_k ~ α/log k while staying in [1/2, 1) for every k ≥ 1.
    """
    alpha: float

    def __call__(self, k: ArrayLike) -> FloatArray:
        kk = np.asarray(k, dtype=float)
        return 1.0 - self.alpha / np.log(kk + math.exp(2.0 * self.alpha))


@dataclass(frozen=True)
class NormalizationRule:
    """
    How Z_n is chosen: ``adaptive`` with rate λ, or ``deterministic`` with an oracle k ↦ Z_k.
    """
    mode: NormalizationMode
    lam: float | None = None
    z: NormalizationOracle | None = None

    def __post_init__(self) -> None:
        if self.mode == "adaptive":
            if self.lam is None or not (self.lam > 0.0 and math.isfinite(self.lam)):
                raise ParameterError("lambda", self.lam, "adaptive normalisation needs a finite rate > 0")
        elif self.mode == "deterministic":
            if self.z is None:
                raise ParameterError("z", None, "deterministic normalisation needs a sequence oracle")
        else:
            raise ParameterError("mode", self.mode, "expected 'adaptive' or 'deterministic'")

    @classmethod
    def adaptive(cls, lam: float) -> NormalizationRule:
        return cls("adaptive", lam=float(lam))

    @classmethod
    def deterministic(cls, z: NormalizationOracle) -> NormalizationRule:
        return cls("deterministic", z=z)

    @classmethod
    def default_deterministic(cls, alpha: float) -> NormalizationRule:
        return cls.deterministic(LogarithmicNormalization(float(alpha)))

    def z_value(self, n: int, weighted_impact: float) -> float:
        if self.mode == "adaptive":
            return weighted_impact / (self.lam * n)  # type: ignore[operator]
        return float(np.asarray(self.z(np.array([n])), dtype=float)[0])  # type: ignore[misc]

    def poisson_parameter(self, n: int, weighted_impact: float) -> float:
        """Total Poisson rate Σ_m F_m imp_n(m) / (n Z_n) of the edges sent by vertex n+1."""
        if weighted_impact <= 0.0:
            return 0.0
        if self.mode == "adaptive":
            return float(self.lam)  # type: ignore[arg-type]
        z = self.z_value(n, weighted_impact)
        if not (math.isfinite(z) and z > 0.0):
            raise DegenerateMeasureError(f"normalisation Z_{n} = {z!r} is not a positive finite number")
        return weighted_impact / (n * z)


class FitnessGraph:
    """
    Growing network state: per-vertex fitness and impact, plus an urn holding every
    vertex once per unit of impact (used to pick attachment targets).
    """
    def __init__(self, rule: NormalizationRule, q: FitnessDistribution, capacity: int = 1024) -> None:
        capacity = max(int(capacity), 1)
        self.rule = rule
        self.q = q
        self.n = 0
        self.edges = 0
        self.weighted_impact = 0.0
        self._fitness = np.empty(capacity, dtype=float)
        self._impact = np.empty(capacity, dtype=np.int64)
        self._outdegree = np.empty(capacity, dtype=np.int64)
        self._urn = np.empty(2 * capacity, dtype=np.int64)
        self._urn_size = 0

    @property
    def fitness(self) -> FloatArray:
        return self._fitness[: self.n]

    @property
    def impact(self) -> IntArray:
        return self._impact[: self.n]

    @property
    def outdegrees(self) -> IntArray:
        """Number of edges sent by vertices 2..n."""
        return self._outdegree[: max(self.n - 1, 0)]

    @property
    def total_impact(self) -> int:
        return int(self._impact[: self.n].sum())

    def _reserve(self, vertices: int, tokens: int) -> None:
        if vertices > self._fitness.size:
            size = max(vertices, 2 * self._fitness.size)
            for name in ("_fitness", "_impact", "_outdegree"):
                old = getattr(self, name)
                new = np.empty(size, dtype=old.dtype)
                new[: old.size] = old
                setattr(self, name, new)
        if tokens > self._urn.size:
            new = np.empty(max(tokens, 2 * self._urn.size), dtype=np.int64)
            new[: self._urn_size] = self._urn[: self._urn_size]
            self._urn = new

    def add_vertex(self, fitness: float) -> None:
        if not (0.0 <= fitness <= 1.0):
            raise ParameterError("fitness", fitness, "must lie in [0, 1]")
        self._reserve(self.n + 1, self._urn_size + 1)
        self._fitness[self.n] = fitness
        self._impact[self.n] = 1
        self._urn[self._urn_size] = self.n
        self._urn_size += 1
        self.weighted_impact += fitness
        self.n += 1

    def attach(self, targets: IntArray) -> None:
        """Adds one edge into each listed vertex (repeats allowed)."""
        k = int(targets.size)
        if k == 0:
            return
        self._reserve(self.n, self._urn_size + k)
        np.add.at(self._impact, targets, 1)
        self._urn[self._urn_size : self._urn_size + k] = targets
        self._urn_size += k
        self.weighted_impact += float(self._fitness[targets].sum())
        self.edges += k

    def draw_targets(self, count: int, rng: np.random.Generator) -> IntArray:
        """``count`` independent vertices with probability ∝ F_m imp(m): uniform urn token, accepted with probability F_m."""
        picked: list[IntArray] = []
        need, tries = count, 0
        urn = self._urn[: self._urn_size]
        while need > 0:
            tries += 1
            if tries > _MAX_REJECTIONS:
                raise DegenerateMeasureError("attachment targets could not be drawn; all fitnesses vanish")
            cand = urn[rng.integers(0, urn.size, size=2 * need + 4)]
            keep = cand[rng.random(cand.size) < self._fitness[cand]][:need]
            picked.append(keep)
            need -= keep.size
        return np.concatenate(picked) if picked else np.empty(0, dtype=np.int64)


@dataclass(frozen=True)
class ImpactMeasure:
    """Ξ_n = n^{-1} Σ_m imp_n(m) δ_{F_m}, with atoms merged by fitness."""
    measure: PointMeasure
    vertices: int
    edges: int

    @property
    def total(self) -> float:
        return (self.vertices + self.edges) / self.vertices

    def mass(self, lo: float, hi: float) -> float:
        """Ξ_n of (lo, hi]; closed at 0 when lo ≤ 0."""
        return self.measure.mass(lo, hi)


@dataclass(frozen=True)
class NetworkWave:
    """
    Ξ_n(1 - x/log n, 1] per replica with ensemble statistics and shape diagnostics.

    ``fit`` is None when the ensemble mean carries no mass near 1.
    """
    xs: FloatArray
    masses: FloatArray
    mean: FloatArray
    stderr: FloatArray
    gamma_estimate: float
    comparator: FloatArray
    monotone: bool
    fit: WaveFit | None

# =========================================================================
# GROWTH
# =========================================================================

def grow_step(g: FitnessGraph, rng: np.random.Generator, fitness: float | None = None) -> FitnessGraph:
    """
    Adds vertex n+1: Z_n is evaluated on the current graph, the Poisson number of new
    edges and their targets are drawn from it, then the new vertex (impact 1) is
    appended. Mutates and returns ``g``.

    Raises:
        DegenerateMeasureError: If the Poisson parameter is not finite.
    """
    if g.n < 1:
        raise ParameterError("n", g.n, "growth starts from a graph with at least one vertex")
    lam = g.rule.poisson_parameter(g.n, g.weighted_impact)
    if not (math.isfinite(lam) and lam >= 0.0):
        raise DegenerateMeasureError(f"Poisson parameter {lam!r} at n={g.n} is not finite")
    count = int(rng.poisson(lam)) if lam > 0.0 else 0
    g.attach(g.draw_targets(count, rng))
    g._outdegree[g.n - 1] = count
    f = float(dist.sample(g.q, 1, rng)[0]) if fitness is None else float(fitness)
    g.add_vertex(f)
    return g

def simulate(
    n_final: int,
    rule: NormalizationRule,
    q: FitnessDistribution,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> FitnessGraph:
    """
    Grows a network to ``n_final`` vertices. All fitnesses are drawn up front from the
    same generator, so a seed determines the graph completely.
    """
    if n_final < 1:
        raise ParameterError("n", n_final, "need at least one vertex")
    if rng is None:
        rng = stream(resolve_seed(seed), 0)
    fitness = dist.sample(q, n_final, rng)
    g = FitnessGraph(rule, q, capacity=n_final)
    g.add_vertex(float(fitness[0]))
    for k in range(1, n_final):
        grow_step(g, rng, float(fitness[k]))
    return g

def impact_measure(g: FitnessGraph) -> ImpactMeasure:
    if g.n < 1:
        raise ParameterError("n", g.n, "empty graph has no impact measure")
    return ImpactMeasure(
        measure=PointMeasure.from_atoms(g.fitness, g.impact / g.n), vertices=g.n, edges=g.edges
    )

def _simulate_replica(
    rng: np.random.Generator,
    n_final: int,
    rule: NormalizationRule,
    q: FitnessDistribution,
    statistic: Callable[[FitnessGraph], Any] | None,
) -> Any:
    fitness = dist.sample(q, n_final, rng)
    g = FitnessGraph(rule, q, capacity=n_final)
    g.add_vertex(float(fitness[0]))
    for k in range(1, n_final):
        grow_step(g, rng, float(fitness[k]))
    return g if statistic is None else statistic(g)

def simulate_ensemble(
    n_final: int,
    rule: NormalizationRule,
    q: FitnessDistribution,
    replicas: int,
    seed: int | None = None,
    workers: int | None = None,
    statistic: Callable[[FitnessGraph], Any] | None = None,
) -> list[Any]:
    """
    Independent replicas on streams (seed, r), returned in replica order.

    With ``statistic`` (a picklable callable), each worker reduces its graphs before
    shipping them back.
    """
    return run_replicas(_simulate_replica, replicas, n_final, rule, q, statistic, seed=seed, workers=workers)

# =========================================================================
# PHASES AND LIMITS
# =========================================================================

def phase_classify(q: FitnessDistribution, lam: float) -> NetworkPhase:
    """'FGR' when ∫ q(dx)/(1-x) ≥ 1 + λ, otherwise 'BE'."""
    if not lam > 0.0:
        raise ParameterError("lambda", lam, "must be positive")
    return "FGR" if dist.reciprocal_gap_integral(q) >= 1.0 + lam else "BE"

def fgr_lambda_star(q: FitnessDistribution, lam: float) -> float:
    """
    The unique λ* ≥ 1 with ∫ λ*/(λ*-x) q(dx) = 1 + λ.

    Raises:
        PhaseError: In the Bose-Einstein phase, where no such λ* exists.
    """
    if not lam > 0.0:
        raise ParameterError("lambda", lam, "must be positive")
    gap = dist.reciprocal_gap_integral(q)
    target = 1.0 + lam
    if gap < target:
        raise PhaseError(gap, lam)
    if gap == target:
        return 1.0

    def excess(s: float) -> float:
        return dist.shifted_reciprocal_mass(q, s) - target

    maxiter = int(get_config("bisection_maxiter"))
    hi = 2.0
    for _ in range(maxiter):
        if excess(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise PhaseError(gap, lam)
    root = optimize.bisect(excess, 1.0, hi, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=maxiter)
    return float(root)

def limit_measure(q: FitnessDistribution, lam: float, lo: float = 0.0, hi: float = 1.0) -> float:
    """
    Limit of Ξ_n over (lo, hi] (closed at 0 when lo = 0) under adaptive normalisation:
    λ*/(λ*-x) q(dx) in the FGR phase, q(dx)/(1-x) plus an atom 1 + λ - ∫ q/(1-x) at 1
    in the BE phase.
    """
    if phase_classify(q, lam) == "FGR":
        return dist.shifted_reciprocal_mass(q, fgr_lambda_star(q, lam), lo, hi)
    atom = 1.0 + lam - dist.reciprocal_gap_integral(q)
    return dist.shifted_reciprocal_mass(q, 1.0, lo, hi) + (atom if hi >= 1.0 else 0.0)

def condensate_mass(q: FitnessDistribution, lam: float) -> float:
    """The BE atom 1 + λ - ∫ q(dx)/(1-x), zero in the FGR phase."""
    return max(0.0, 1.0 + lam - dist.reciprocal_gap_integral(q))

def deterministic_limit_measure(q: FitnessDistribution, gamma: float, lo: float = 0.0, hi: float = 1.0) -> float:
    """(1-x)^{-1} q(dx) + γ δ₁ over (lo, hi]: the limit under a deterministic normalisation with condensate γ."""
    return dist.shifted_reciprocal_mass(q, 1.0, lo, hi) + (gamma if hi >= 1.0 else 0.0)

def upsilon(z: NormalizationOracle, m: float, n: float) -> float:
    """
    Υ[m, n] = Σ_{k=⌊m⌋}^{⌊n⌋} (1 - Z_k)/k.

    Examples:
        >>> round(upsilon(lambda k: 1.0 - 1.0 / k, 1, 4), 7)
        1.4236111
    """
    if not (1.0 <= m <= n):
        raise ParameterError("range", (m, n), "need 1 <= m <= n")
    k = np.arange(math.floor(m), math.floor(n) + 1)
    zk = np.asarray(z(k), dtype=float)
    return math.fsum(((1.0 - zk) / k).tolist())

def gamma_estimate(
    z: NormalizationOracle,
    alpha: float,
    n: int,
    ell: Callable[[float], float] | None = None,
) -> float:
    """
    Finite-n value of the condensate expression

        (α/(α-1)) Γ(α) (log n)^α (log log n)^α / ℓ(1/log n) · exp Υ[log n, n],

    whose stabilisation in n signals a deterministic normalisation with a condensate.
    """
    if not alpha > 1.0:
        raise ParameterError("alpha", alpha, "must exceed 1")
    if n < 16:
        raise ParameterError("n", n, "need n >= 16 so that log log n is positive")
    big_l = math.log(n)
    slowly = 1.0 if ell is None else float(ell(1.0 / big_l))
    log_value = (
        math.log(alpha / (alpha - 1.0))
        + float(special.gammaln(alpha))
        + alpha * math.log(big_l)
        + alpha * math.log(math.log(big_l))
        - math.log(slowly)
        + upsilon(z, big_l, n)
    )
    return math.exp(log_value)

# =========================================================================
# WAVE DIAGNOSTICS
# =========================================================================

def wave_masses(g: FitnessGraph, xs: ArrayLike) -> FloatArray:
    """Ξ_n(1 - x/log n, 1] for each x (window closed at 0 once it covers [0, 1])."""
    if g.n < 2:
        raise ParameterError("n", g.n, "the wave needs log n > 0")
    grid = np.atleast_1d(np.asarray(xs, dtype=float))
    measure = impact_measure(g)
    big_l = math.log(g.n)
    return np.array([measure.mass(max(0.0, 1.0 - x / big_l), 1.0) for x in grid])

def wave_estimate(
    graphs: list[FitnessGraph] | FloatArray,
    xs: ArrayLike,
    n: int | None = None,
    rule: NormalizationRule | None = None,
    q: FitnessDistribution | None = None,
) -> NetworkWave:
    """
    Ensemble wave diagnostics for deterministic-normalisation runs.

    ``graphs`` is either a list of graphs or a precomputed (replicas × xs) array of
    `wave_masses`; in the latter case ``n``, ``rule`` and ``q`` must be given.
    """
    grid = np.atleast_1d(np.asarray(xs, dtype=float))
    if isinstance(graphs, list) and graphs and isinstance(graphs[0], FitnessGraph):
        n = graphs[0].n if n is None else n
        rule = graphs[0].rule if rule is None else rule
        q = graphs[0].q if q is None else q
        if any(g.n != n for g in graphs):
            raise ParameterError("graphs", "...", "all replicas must have the same size")
        masses = np.vstack([wave_masses(g, grid) for g in graphs])
    else:
        masses = np.atleast_2d(np.asarray(graphs, dtype=float))
    if n is None or rule is None or q is None:
        raise ParameterError("graphs", "array", "n, rule and q are required with precomputed masses")
    if rule.mode != "deterministic":
        raise ParameterError("rule", rule.mode, "the network wave is defined for deterministic normalisation")
    if q.kind != "polytail":
        raise ParameterError("q", q, "the wave comparator needs the polynomial-tail family")

    alpha = float(q.alpha)  # type: ignore[arg-type]
    summary = ensemble_summary(masses)
    g_est = gamma_estimate(rule.z, alpha, n)  # type: ignore[arg-type]
    comparator = g_est * np.asarray(regularized_lower_gamma(alpha, grid), dtype=float)
    monotone = bool(np.all(np.diff(masses, axis=1) >= -1e-12))
    fit: WaveFit | None = None
    if grid.size >= 2 and summary.mean[-1] > 0.0:
        try:
            fit = fit_gamma_shape(grid, summary.mean)
        except DegenerateProfileError:
            fit = None
    return NetworkWave(
        xs=grid,
        masses=masses,
        mean=summary.mean,
        stderr=summary.stderr,
        gamma_estimate=g_est,
        comparator=comparator,
        monotone=monotone,
        fit=fit,
    )

def wave_statistic(xs: ArrayLike) -> Callable[[FitnessGraph], FloatArray]:
    """A picklable per-replica reducer computing `wave_masses` on a fixed grid."""
    return partial(wave_masses, xs=np.atleast_1d(np.asarray(xs, dtype=float)))
