"""
Cycle-Weighted Random Permutations.

Under P_n(σ) = (n! h_n)^{-1} ∏_j θ_j^{R_j(σ)}, where R_j(σ) counts the j-cycles of σ,
the permutation is sampled only through its cycle type: the cycle containing the
lowest remaining element has length j with probability θ_j h_{m-j} / (m h_m) on m
remaining elements. The normalisation constants solve n h_n = Σ_{j=1}^n θ_j h_{n-j}.

For θ_j = j^γ the empirical cycle-length law μ_n = n^{-1} Σ_i λ_i δ_{λ_i/n} develops a
gamma wave at 0 when γ > 0 and a giant cycle near 1 when γ < 0.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .analysis import EnsembleSummary, ensemble_summary, regularized_lower_gamma
from .config import get_config
from .distributions import PointMeasure
from .random import replica_matrix, resolve_seed, run_replicas
from .renewal import malthusian_root
from ..exceptions import ParameterError, WeightNormalizationError
from .._typing import ArrayLike, CyclePhase, FloatArray, IntArray

_BRUTE_FORCE_LIMIT = 8
_FIRST_CHUNK = 64


@dataclass(frozen=True)
class CycleWeights:
    """
    Multiplicative cycle weights θ_j > 0.

    Either the exact power law θ_j = j^γ (``gamma_p``) or an explicit finite sequence
    θ_1, θ_2, ... (``theta``).
    """
    gamma_p: float | None = None
    theta: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if (self.gamma_p is None) == (self.theta is None):
            raise ParameterError("weights", (self.gamma_p, self.theta), "give exactly one of gamma_p or theta")
        if self.gamma_p is not None and not math.isfinite(self.gamma_p):
            raise ParameterError("gamma_p", self.gamma_p, "must be finite")
        if self.theta is not None and (not self.theta or min(self.theta) <= 0.0):
            raise ParameterError("theta", self.theta, "cycle weights must be positive")

    @classmethod
    def power(cls, gamma_p: float) -> CycleWeights:
        return cls(gamma_p=float(gamma_p))

    @classmethod
    def explicit(cls, theta: ArrayLike) -> CycleWeights:
        return cls(theta=tuple(float(t) for t in np.asarray(theta, dtype=float).ravel()))

    @classmethod
    def constant(cls, value: float, length: int) -> CycleWeights:
        return cls.explicit(np.full(length, float(value)))

    @property
    def max_length(self) -> int | None:
        return None if self.theta is None else len(self.theta)

    def log_theta(self, j: ArrayLike) -> FloatArray:
        idx = np.asarray(j, dtype=np.int64)
        if np.any(idx < 1):
            raise ParameterError("j", "...", "cycle lengths start at 1")
        if self.gamma_p is not None:
            return self.gamma_p * np.log(idx.astype(float))
        if idx.size and int(idx.max()) > len(self.theta):  # type: ignore[arg-type]
            raise ParameterError("j", int(idx.max()), f"only {len(self.theta)} weights were given")  # type: ignore[arg-type]
        return np.log(np.asarray(self.theta, dtype=float)[idx - 1])

    def __call__(self, j: ArrayLike) -> FloatArray:
        return np.exp(self.log_theta(j))


@dataclass(frozen=True, eq=False)
class NormalizationSeq:
    """
    The constants h_0 = 1, h_1, ..., h_N stored in log-space.

    Calling the object with an index array returns h at those indices, so it can be
    handed to `renewal.malthusian_root` directly.
    """
    log_h: FloatArray

    def __len__(self) -> int:
        return int(self.log_h.shape[0]) - 1

    @property
    def values(self) -> FloatArray:
        return np.exp(self.log_h)

    def __call__(self, idx: ArrayLike) -> FloatArray:
        k = np.asarray(idx, dtype=np.int64)
        if k.size and (int(k.min()) < 0 or int(k.max()) > len(self)):
            raise ParameterError("n", int(k.max()), f"normalisation constants are known up to {len(self)}")
        return np.exp(self.log_h[k])


@dataclass(frozen=True)
class CyclePartitionSample:
    """
    The cycle type of one random permutation.

    Attributes:
        lengths: Ordered cycle lengths λ₁ ≥ λ₂ ≥ ... summing to n.
        n: Permutation size.
        draw_order: Lengths in the order the sequential sampler produced them.
        stream: Replica index of the generator that produced the sample, if known.
    """
    lengths: tuple[int, ...]
    n: int
    draw_order: tuple[int, ...] = field(default=(), compare=False)
    stream: int | None = field(default=None, compare=False)

    @property
    def cycle_counts(self) -> dict[int, int]:
        """R_j: number of cycles of each length."""
        return dict(sorted(Counter(self.lengths).items()))

    def window_mass(self, lo: int, hi: int) -> float:
        """μ_n of the closed cycle-length window [lo, hi], i.e. Σ_{lo ≤ λ_i ≤ hi} λ_i / n."""
        return sum(l for l in self.lengths if lo <= l <= hi) / self.n


@dataclass(frozen=True)
class MonteCarloEstimate:
    """
    Replica means of a family of window masses next to their comparators.

    Attributes:
        points: The x values (left wave) or cutoffs m (right wave).
        mean, stderr: Ensemble mean and standard error per point.
        comparator: The limiting value quoted for each point.
        exact: The exact finite-n expectation per point.
        replicas: Replica count.
        seed: Master seed of the ensemble.
    """
    points: FloatArray
    mean: FloatArray
    stderr: FloatArray
    comparator: FloatArray
    exact: FloatArray
    replicas: int
    seed: int

# =========================================================================
# NORMALISATION CONSTANTS
# =========================================================================

def compute_h(w: CycleWeights, n_max: int) -> NormalizationSeq:
    """
    h_0 = 1 and h_n = n^{-1} Σ_{j=1}^{n} θ_j h_{n-j} for n ≤ N.

    The recursion runs in linear scale and falls back to log-space (logsumexp) when the
    values overflow, which happens for γ > 0 at large N.

    Examples:
        >>> compute_h(CycleWeights.constant(2.0, 3), 3).values.round(12).tolist()
        [1.0, 2.0, 3.0, 4.0]
    """
    if n_max < 1:
        raise ParameterError("N", n_max, "need at least one constant")
    cap = int(get_config("generation_cap"))
    if n_max > cap:
        raise ParameterError("N", n_max, f"exceeds generation_cap={cap}")

    log_theta = w.log_theta(np.arange(1, n_max + 1))
    theta = np.exp(log_theta)
    h = np.empty(n_max + 1, dtype=float)
    h[0] = 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_max + 1):
            h[n] = np.dot(theta[:n], h[n - 1::-1]) / n
    if np.all(np.isfinite(h)) and np.all(h > 0.0) and h.max() < 1e300:
        log_h = np.log(h)
    else:
        log_h = np.empty(n_max + 1, dtype=float)
        log_h[0] = 0.0
        for n in range(1, n_max + 1):
            log_h[n] = special.logsumexp(log_theta[:n] + log_h[n - 1::-1]) - math.log(n)
    log_h.setflags(write=False)
    return NormalizationSeq(log_h=log_h)

def fit_h_exponent(h: NormalizationSeq, lo: int, hi: int) -> float:
    """Least-squares slope of log h_n against log n over [lo, hi]; approaches γ - 1 for γ < 0."""
    if not (1 <= lo < hi <= len(h)):
        raise ParameterError("range", (lo, hi), f"need 1 <= lo < hi <= {len(h)}")
    n = np.arange(lo, hi + 1)
    slope, _ = np.polyfit(np.log(n), h.log_h[n], 1)
    return float(slope)

def cycle_phase(gamma_p: float) -> CyclePhase:
    """Where the mass of μ_n concentrates: short cycles ('left'), a giant cycle ('right'), or neither."""
    if gamma_p > 0.0:
        return "left"
    if gamma_p < 0.0:
        return "right"
    return "bulk"

# =========================================================================
# BRUTE-FORCE ORACLES
# =========================================================================

def _cycle_type(perm: tuple[int, ...]) -> tuple[int, ...]:
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, k = 0, start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))

def brute_force_cycle_types(w: CycleWeights, n: int) -> dict[tuple[int, ...], float]:
    """
    P_n of every cycle type, by enumerating all of S_n (n ≤ 8).
    """
    if not (1 <= n <= _BRUTE_FORCE_LIMIT):
        raise ParameterError("n", n, f"brute-force enumeration is limited to 1 <= n <= {_BRUTE_FORCE_LIMIT}")
    theta = w(np.arange(1, n + 1))
    weights: dict[tuple[int, ...], list[float]] = {}
    for perm in itertools.permutations(range(n)):
        ctype = _cycle_type(perm)
        weights.setdefault(ctype, []).append(math.prod(float(theta[l - 1]) for l in ctype))
    sums = {k: math.fsum(v) for k, v in weights.items()}
    total = math.fsum(sums.values())
    return {k: v / total for k, v in sorted(sums.items(), reverse=True)}

def brute_force_h(w: CycleWeights, n: int) -> float:
    """h_n = (n!)^{-1} Σ_{σ ∈ S_n} ∏_j θ_j^{R_j(σ)}, by full enumeration (n ≤ 8)."""
    if not (1 <= n <= _BRUTE_FORCE_LIMIT):
        raise ParameterError("n", n, f"brute-force enumeration is limited to 1 <= n <= {_BRUTE_FORCE_LIMIT}")
    theta = w(np.arange(1, n + 1))
    terms = [
        math.prod(float(theta[l - 1]) for l in _cycle_type(perm))
        for perm in itertools.permutations(range(n))
    ]
    return math.fsum(terms) / math.factorial(n)

# =========================================================================
# SAMPLING
# =========================================================================

def first_cycle_marginal(w: CycleWeights, h: NormalizationSeq, n: int) -> FloatArray:
    """P(L = j) = θ_j h_{n-j} / (n h_n) for j = 1..n (index j-1)."""
    if not (1 <= n <= len(h)):
        raise ParameterError("n", n, f"need 1 <= n <= {len(h)}")
    j = np.arange(1, n + 1)
    return np.exp(w.log_theta(j) + h.log_h[n - j] - math.log(n) - h.log_h[n])

def expected_interval_mass(w: CycleWeights, h: NormalizationSeq, n: int, lo: int, hi: int) -> float:
    """
    Exact E[μ_n] of the closed cycle-length window [lo, hi]: the probability that the
    cycle through a fixed element has its length in the window.
    """
    lo, hi = max(int(lo), 1), min(int(hi), n)
    if lo > hi:
        return 0.0
    p = first_cycle_marginal(w, h, n)
    return math.fsum(p[lo - 1:hi].tolist())


class CycleSampler:
    """
    Sequential sampler of cycle types under P_n.

    The length of the next cycle is drawn by inverse transform over j = 1, 2, ...,
    evaluating the categorical weights in growing chunks, so a draw costs time
    proportional to the length it returns.
    """
    def __init__(self, w: CycleWeights, h: NormalizationSeq, n: int) -> None:
        if not (1 <= n <= len(h)):
            raise ParameterError("n", n, f"need 1 <= n <= {len(h)} (computed normalisation constants)")
        self.n = n
        self._log_theta = w.log_theta(np.arange(1, n + 1))
        self._log_h = h.log_h[: n + 1]
        self._log_m = np.log(np.arange(1, n + 1, dtype=float))
        self._tol = float(get_config("weight_tolerance"))
        self._strict = bool(get_config("strict_weights"))
        self._verified = np.zeros(n + 1, dtype=bool)

    def _weights(self, m: int, j0: int, j1: int) -> FloatArray:
        j = np.arange(j0, j1)
        return np.exp(self._log_theta[j - 1] + self._log_h[m - j] - self._log_m[m - 1] - self._log_h[m])

    def _check_total(self, m: int, total: float) -> None:
        if abs(total - 1.0) > self._tol:
            raise WeightNormalizationError(m, total)

    def _verify(self, m: int) -> None:
        # each categorical law is summed once per sampler; no random numbers are consumed
        if not self._verified[m]:
            self._check_total(m, float(np.sum(self._weights(m, 1, m + 1))))
            self._verified[m] = True

    def draw_length(self, m: int, rng: np.random.Generator) -> int:
        if self._strict:
            self._verify(m)
        target = rng.random()
        acc = 0.0
        j0, chunk = 1, _FIRST_CHUNK
        while j0 <= m:
            j1 = min(j0 + chunk, m + 1)
            cum = acc + np.cumsum(self._weights(m, j0, j1))
            k = int(np.searchsorted(cum, target, side="right"))
            if k < cum.size:
                return j0 + k
            acc = float(cum[-1])
            j0, chunk = j1, chunk * 2
        self._check_total(m, acc)
        return m

    def sample(self, rng: np.random.Generator, stream: int | None = None) -> CyclePartitionSample:
        remaining = self.n
        drawn: list[int] = []
        while remaining > 0:
            length = self.draw_length(remaining, rng)
            drawn.append(length)
            remaining -= length
        return CyclePartitionSample(
            lengths=tuple(sorted(drawn, reverse=True)), n=self.n, draw_order=tuple(drawn), stream=stream
        )

def sample_cycles(
    w: CycleWeights,
    h: NormalizationSeq,
    n: int,
    rng: np.random.Generator,
    stream: int | None = None,
) -> CyclePartitionSample:
    """
    Draws the cycle type of one permutation of size n under P_n.

    Raises:
        WeightNormalizationError: If a categorical law misses unit mass by more than
            ``weight_tolerance`` (a corrupted h).
    """
    return CycleSampler(w, h, n).sample(rng, stream)

def empirical_measure(s: CyclePartitionSample) -> PointMeasure:
    """
    μ_n = n^{-1} Σ_i λ_i δ_{λ_i/n}, with repeated lengths merged into one atom.

    Examples:
        >>> empirical_measure(CyclePartitionSample((3, 2, 1), 6)).as_dict()
        {0.16666666666666666: 0.16666666666666666, 0.3333333333333333: 0.3333333333333333, 0.5: 0.5}
    """
    lengths = np.asarray(s.lengths, dtype=float)
    return PointMeasure.from_atoms(lengths / s.n, lengths / s.n)

# =========================================================================
# EDGE WAVES
# =========================================================================

def left_wave_exponent(gamma_p: float) -> float:
    """α = γ/(γ+1): the wave sits at scale n^{-α} in μ_n, i.e. at cycle lengths of order n^{1/(γ+1)}."""
    if not gamma_p > 0.0:
        raise ParameterError("gamma_p", gamma_p, "the left-edge wave needs gamma_p > 0")
    return gamma_p / (gamma_p + 1.0)

def left_wave_limit(gamma_p: float, x: ArrayLike) -> float | FloatArray:
    """lim E μ_n[0, x n^{-α}) = Γ(γ+1)^{-1} ∫_0^x y^γ e^{-y} dy."""
    left_wave_exponent(gamma_p)
    return regularized_lower_gamma(gamma_p + 1.0, x)

def _left_cutoffs(gamma_p: float, n: int, xs: FloatArray) -> IntArray:
    # λ/n < x n^{-α}  ⇔  λ ≤ ceil(x n^{1-α}) - 1
    scale = n ** (1.0 - left_wave_exponent(gamma_p))
    return np.ceil(xs * scale).astype(np.int64) - 1

def right_wave_limit(w: CycleWeights, m: int, h: NormalizationSeq | None = None) -> float:
    """
    The quoted right-edge comparator ½ Σ_{k=0}^{m} e^{-c*k} h_k with the Malthusian
    parameter c* of (h_k).

    Raises:
        NoRootError: If Σ h_k ≤ 1.
    """
    if m < 0:
        raise ParameterError("m", m, "cutoff must be nonnegative")
    if h is None or len(h) < max(m, 4096):
        h = compute_h(w, max(m, 4096))
    c = malthusian_root(h)
    k = np.arange(m + 1)
    return 0.5 * math.fsum(np.exp(h.log_h[k] - c * k).tolist())

def giant_cycle_limit(w: CycleWeights, m: int, h: NormalizationSeq | None = None) -> float:
    """
    lim E μ_n[1 - m/n, 1] = Σ_{k≤m} h_k / Σ_k h_k for θ_j = j^γ with γ < 0, where
    Σ_k h_k = exp(ζ(1-γ)). The elements outside the giant cycle form a finite
    remainder whose size k has law h_k / Σ h.
    """
    if w.gamma_p is None or not w.gamma_p < 0.0:
        raise ParameterError("gamma_p", w.gamma_p, "the giant-cycle law needs power weights with gamma_p < 0")
    if m < 0:
        raise ParameterError("m", m, "cutoff must be nonnegative")
    if h is None or len(h) < m:
        h = compute_h(w, max(m, 1))
    total = math.exp(float(special.zeta(1.0 - w.gamma_p)))
    return math.fsum(h.values[: m + 1].tolist()) / total

def _left_replica(rng: np.random.Generator, sampler: CycleSampler, cutoffs: IntArray) -> FloatArray:
    s = sampler.sample(rng)
    return np.array([s.window_mass(1, int(c)) for c in cutoffs])

def _right_replica(rng: np.random.Generator, sampler: CycleSampler, ms: IntArray) -> FloatArray:
    s = sampler.sample(rng)
    return np.array([s.window_mass(sampler.n - int(m), sampler.n) for m in ms])

def left_wave_mc(
    w: CycleWeights,
    n: int,
    xs: ArrayLike,
    replicas: int,
    seed: int | None = None,
    workers: int | None = None,
) -> MonteCarloEstimate:
    """
    Monte Carlo estimate of E μ_n[0, x n^{-α}) for γ > 0, with the gamma comparator
    and the exact finite-n expectation.
    """
    if w.gamma_p is None:
        raise ParameterError("weights", w, "the left-edge wave needs power weights")
    grid = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(grid <= 0.0):
        raise ParameterError("xs", "...", "wave coordinates must be positive")
    cutoffs = _left_cutoffs(w.gamma_p, n, grid)
    h = compute_h(w, n)
    master = resolve_seed(seed)
    rows = run_replicas(_left_replica, replicas, CycleSampler(w, h, n), cutoffs, seed=master, workers=workers)
    summary: EnsembleSummary = ensemble_summary(replica_matrix(rows))
    exact = np.array([expected_interval_mass(w, h, n, 1, int(c)) for c in cutoffs])
    return MonteCarloEstimate(
        points=grid,
        mean=summary.mean,
        stderr=summary.stderr,
        comparator=np.atleast_1d(np.asarray(left_wave_limit(w.gamma_p, grid), dtype=float)),
        exact=exact,
        replicas=replicas,
        seed=master,
    )

def right_wave_mc(
    w: CycleWeights,
    n: int,
    ms: ArrayLike,
    replicas: int,
    seed: int | None = None,
    workers: int | None = None,
) -> MonteCarloEstimate:
    """
    Monte Carlo estimate of E μ_n[1 - m/n, 1] for γ < 0, next to the quoted comparator
    ½ Σ_{k≤m} e^{-c*k} h_k and the exact finite-n expectation.
    """
    if w.gamma_p is None or not w.gamma_p < 0.0:
        raise ParameterError("gamma_p", w.gamma_p, "the right-edge wave needs power weights with gamma_p < 0")
    cut = np.atleast_1d(np.asarray(ms, dtype=np.int64))
    if np.any(cut < 0) or np.any(cut >= n):
        raise ParameterError("ms", "...", f"cutoffs must lie in [0, {n - 1}]")
    h = compute_h(w, max(n, 4096))
    master = resolve_seed(seed)
    rows = run_replicas(_right_replica, replicas, CycleSampler(w, h, n), cut, seed=master, workers=workers)
    summary = ensemble_summary(replica_matrix(rows))
    c_star = malthusian_root(h)
    comparator = np.array([0.5 * math.fsum(np.exp(h.log_h[: m + 1] - c_star * np.arange(m + 1)).tolist()) for m in cut])
    exact = np.array([expected_interval_mass(w, h, n, n - int(m), n) for m in cut])
    return MonteCarloEstimate(
        points=cut.astype(float),
        mean=summary.mean,
        stderr=summary.stderr,
        comparator=comparator,
        exact=exact,
        replicas=replicas,
        seed=master,
    )
