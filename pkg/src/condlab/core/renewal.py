"""
Defective Renewal Equations.

Solver and series machinery for recursions of the form

    u_n = Σ_{r=1}^{n-1} a_r u_{n-r} + b_n,   n ≥ 1,

together with the certified truncation of infinite nonnegative series and the
Malthusian tilt c* solving Σ_{n≥1} e^{-c*n} h_n = 1. Shared by the Kingman core
(tilted weight sequence) and the permutation module (right-edge comparator).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .config import get_config
from ..exceptions import ConvergenceError, NoRootError, NonDefectiveSystemError, ParameterError
from .._typing import FloatArray, IntArray, SequenceOracle

_FIRST_CHUNK = 256
_MAX_CHUNK = 1 << 20


@dataclass(frozen=True)
class RenewalSystem:
    """
    A renewal equation given by oracles for its kernel (a_r, r ≥ 1) and forcing (b_n, n ≥ 1).

    Both oracles receive an integer index array and return the matching values.
    ``kernel_total`` is Σ a_r, supplied in closed form whenever one is known.
    """
    kernel: SequenceOracle
    forcing: SequenceOracle
    kernel_total: float

    @property
    def defective(self) -> bool:
        return self.kernel_total < 1.0


@dataclass(frozen=True)
class SeriesSum:
    """
    Result of a truncated nonnegative series.

    Attributes:
        value: The partial sum (plus any exact remainder the caller folded in).
        terms: Number of terms summed.
        tail_bound: Certified upper bound on the neglected remainder.
        exceeded: True when summation stopped early because the partial sum crossed
            the requested ``stop_above`` threshold.
    """
    value: float
    terms: int
    tail_bound: float
    exceeded: bool = False


def solve(system: RenewalSystem, n_max: int) -> FloatArray:
    """
    Solves the renewal recursion for u_1, ..., u_N by direct convolution.

    Runs in O(N²) time and O(N) memory. The returned array is indexed so that
    ``u[k] == u_{k+1}``.

    Raises:
        ParameterError: If N < 1 or N exceeds the ``generation_cap`` setting.
    """
    if n_max < 1:
        raise ParameterError("N", n_max, "need at least one term")
    cap = int(get_config("generation_cap"))
    if n_max > cap:
        raise ParameterError("N", n_max, f"exceeds generation_cap={cap}")
    if n_max > int(get_config("renewal_warn_threshold")):
        warnings.warn(
            f"\033[33m[condlab Warning]\033[0m Solving a renewal system to N={n_max} costs O(N²) "
            f"operations and may take a long time.",
            UserWarning,
            stacklevel=2,
        )

    b = np.asarray(system.forcing(np.arange(1, n_max + 1)), dtype=float)
    a = np.asarray(system.kernel(np.arange(1, n_max)), dtype=float) if n_max > 1 else np.empty(0)

    u = np.empty(n_max, dtype=float)
    u[0] = b[0]
    for k in range(1, n_max):
        u[k] = np.dot(a[:k], u[k - 1::-1]) + b[k]
    u.setflags(write=False)
    return u

def total_sum(system: RenewalSystem, forcing_total: float) -> float:
    """
    Σ_{n≥1} u_n = Σ b_n / (1 - Σ a_r) for a defective system.

    Raises:
        NonDefectiveSystemError: If the kernel total is 1 or more.
    """
    if not system.defective:
        raise NonDefectiveSystemError(system.kernel_total)
    if not math.isfinite(forcing_total):
        raise ParameterError("forcing_total", forcing_total, "must be finite")
    return forcing_total / (1.0 - system.kernel_total)

# =========================================================================
# SERIES TRUNCATION
# =========================================================================

def truncated_sum(
    term: Callable[[IntArray], FloatArray],
    tail_bound: Callable[[int, FloatArray], float],
    start: int = 1,
    *,
    stop_above: float | None = None,
    rtol: float | None = None,
    atol: float | None = None,
    max_terms: int | None = None,
) -> SeriesSum:
    """
    Sums a nonnegative series term(start) + term(start+1) + ... in growing chunks.

    Summation stops only when both hold: the current term is below ``rtol`` times the
    running sum, and ``tail_bound(next_index, last_chunk)`` certifies the remainder
    below ``atol``. With ``stop_above`` set, summation also stops as soon as the
    partial sum exceeds that value (only the sign of sum - stop_above is then known).

    Args:
        term: Vectorised term oracle over an index array.
        tail_bound: Upper bound of Σ_{n ≥ next_index} term(n); it receives the terms of
            the last chunk to support ratio-based bounds.
        start: First index.
        stop_above: Optional early-exit threshold.
        rtol: Term-to-sum ratio; defaults to ``series_rtol``.
        atol: Remainder certificate; defaults to ``atol``.
        max_terms: Budget; defaults to ``series_max_terms``.
    """
    rtol = float(get_config("series_rtol", rtol))
    atol = float(get_config("atol", atol))
    max_terms = int(get_config("series_max_terms", max_terms))

    partials: list[float] = []
    total = 0.0
    index = start
    chunk = _FIRST_CHUNK
    bound = math.inf
    while index - start < max_terms:
        size = min(chunk, max_terms - (index - start))
        values = np.asarray(term(np.arange(index, index + size)), dtype=float)
        if np.any(~np.isfinite(values)):
            raise ConvergenceError(f"series term became non-finite near index {index}")
        if stop_above is not None:
            running = total + np.cumsum(values)
            crossed = np.flatnonzero(running > stop_above)
            if crossed.size:
                k = int(crossed[0]) + 1
                partials.append(math.fsum(values[:k].tolist()))
                return SeriesSum(math.fsum(partials), index - start + k, math.inf, exceeded=True)
        partials.append(math.fsum(values.tolist()))
        total = math.fsum(partials)
        index += size
        last = float(values[-1])
        if last <= rtol * total:
            bound = float(tail_bound(index, values))
            if bound <= atol:
                return SeriesSum(total, index - start, bound)
        chunk = min(chunk * 2, _MAX_CHUNK)

    bound = float(tail_bound(index, values))
    warnings.warn(
        f"\033[33m[condlab Warning]\033[0m Series truncated after {max_terms} terms with remainder "
        f"bound {bound:.3e}; result may be inaccurate.",
        RuntimeWarning,
        stacklevel=2,
    )
    return SeriesSum(total, index - start, bound)

def _geometric_tail(rate: float) -> Callable[[int, FloatArray], float]:
    # Remainder after a chunk: t_last·ρ/(1-ρ), ρ dominating every later term ratio.
    def bound(_: int, values: FloatArray) -> float:
        last = float(values[-1])
        if last == 0.0:
            return 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = values[1:] / values[:-1]
        ratios = ratios[np.isfinite(ratios)]
        rho = max(float(ratios.max()) if ratios.size else 0.0, rate)
        return math.inf if rho >= 1.0 else last * rho / (1.0 - rho)
    return bound

def tilted_sum(h: SequenceOracle, c: float, *, stop_above: float | None = None) -> SeriesSum:
    """
    Σ_{n≥1} e^{-cn} h_n with the geometric-domination remainder certificate.

    The remainder after index N is bounded by t_N·ρ/(1-ρ), where ρ is the larger of
    e^{-c} and the largest consecutive term ratio in the last chunk. This dominates
    the tail for every sequence whose term ratios are eventually monotone.
    """
    if c <= 0.0:
        raise ParameterError("c", c, "tilt must be positive")

    def term(idx: IntArray) -> FloatArray:
        hv = np.asarray(h(idx), dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(hv > 0.0, np.exp(np.log(np.where(hv > 0.0, hv, 1.0)) - c * idx), 0.0)

    return truncated_sum(term, _geometric_tail(math.exp(-c)), start=1, stop_above=stop_above)

def malthusian_root(h: SequenceOracle, bracket_hint: float = 1.0) -> float:
    """
    Finds the Malthusian parameter c* > 0 with Σ_{n≥1} e^{-c*n} h_n = 1.

    The map c ↦ Σ e^{-cn} h_n is strictly decreasing; the root is bracketed on
    [1e-12, hi] where hi starts at ``bracket_hint`` and doubles until the sum falls
    below one, then located by bisection to machine precision.

    Examples:
        >>> malthusian_root(lambda n: np.ones(len(n)))  # doctest: +ELLIPSIS
        0.6931471805599...

    Raises:
        NoRootError: If the sum at c = 1e-12 does not exceed one (Σ h_n ≤ 1).
    """
    if not bracket_hint > 0.0:
        raise ParameterError("bracket_hint", bracket_hint, "must be positive")
    h1 = float(np.asarray(h(np.array([1])), dtype=float)[0])
    if not h1 > 0.0:
        raise ParameterError("h_1", h1, "first weight must be positive")

    def excess(c: float) -> float:
        return tilted_sum(h, c, stop_above=1.0).value - 1.0

    lo = 1e-12
    if excess(lo) <= 0.0:
        raise NoRootError("Malthusian parameter", "the weight sequence never sums beyond 1")

    maxiter = int(get_config("bisection_maxiter"))
    hi = float(bracket_hint)
    for _ in range(maxiter):
        if excess(hi) < 0.0:
            break
        lo, hi = hi, hi * 2.0
    else:
        raise NoRootError("Malthusian parameter", f"no sign change found below c = {hi!r}")

    root = optimize.bisect(excess, lo, hi, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=maxiter)
    return float(root)
