from __future__ import annotations

import sys
from contextvars import ContextVar
from contextlib import contextmanager
from typing import Any, Generator
from .._typing import ConfigDict, TailMethod

_GLB = "__condlab_global__"
_CTX = "__condlab_context__"

_DEFAULTS: ConfigDict = {
    "rtol": 1e-9,
    "atol": 1e-12,
    "quadrature_nodes": 64,
    "quadrature_rtol": 1e-10,
    "tail_method": "closed",
    "series_rtol": 1e-15,
    "series_max_terms": 2 ** 26,
    "bisection_maxiter": 200,
    "generation_cap": 10 ** 6,
    "renewal_warn_threshold": 10 ** 5,
    "weight_tolerance": 1e-9,
    "strict_weights": True,
    "seed": None,
    "default_seed": 20120101,
    "workers": 1,
    "float_digits": 17,
}

def _global() -> ConfigDict:
    if _GLB not in sys.modules:
        sys.modules[_GLB] = dict(_DEFAULTS)  # type: ignore[assignment]
    return sys.modules[_GLB]  # type: ignore[return-value]

def _context() -> ContextVar[dict[str, Any]]:
    if _CTX not in sys.modules:
        sys.modules[_CTX] = ContextVar("CONDLAB_CONTEXT", default={})  # type: ignore[assignment]
    return sys.modules[_CTX]  # type: ignore[return-value]

def known_keys() -> frozenset[str]:
    """Names accepted by `config`, `using` and CLI configuration files."""
    return frozenset(_DEFAULTS)

def config(
    rtol: float | None = None,
    atol: float | None = None,
    quadrature_nodes: int | None = None,
    quadrature_rtol: float | None = None,
    tail_method: TailMethod | None = None,
    series_rtol: float | None = None,
    series_max_terms: int | None = None,
    bisection_maxiter: int | None = None,
    generation_cap: int | None = None,
    renewal_warn_threshold: int | None = None,
    weight_tolerance: float | None = None,
    strict_weights: bool | None = None,
    seed: int | None = None,
    default_seed: int | None = None,
    workers: int | None = None,
    float_digits: int | None = None,
) -> None:
    """
    Configures the global numerical behaviour of condlab.

    Args:
        rtol: Tolerance of the unit-sum checks on grid weights and categorical probabilities. Default is 1e-9.
        atol: Absolute tolerance for floating-point identity checks. Default is 1e-12.
        quadrature_nodes: Number of Gauss-Legendre nodes of the fixed-order quadrature path. Default is 64.
        quadrature_rtol: Deviation above which `quadrature_self_check` warns. Default is 1e-10.
        tail_method: How polynomial-tail power integrals are evaluated.
            - 'closed': (Default) regularized incomplete beta function, exact for every r.
            - 'quadrature': fixed-order Gauss-Legendre on the substituted integrand.
        series_rtol: A series is truncated only after its current term falls below
            this fraction of the running sum. Default is 1e-15.
        series_max_terms: Hard cap on the number of terms summed by `truncated_sum`.
        bisection_maxiter: Iteration budget of every bisection root search. Default is 200.
        generation_cap: Largest generation/length a weight sequence may be computed to. Default is 10**6.
        renewal_warn_threshold: Lengths above this trigger a warning about the O(N²) solver cost.
        weight_tolerance: Allowed deviation from 1 of a categorical cycle-length law. Default is 1e-9.
        strict_weights: If True (default), the full categorical law of every remaining size m is
            summed once per sampler and a deviation beyond `weight_tolerance` raises.
        seed: Master seed used when a caller passes none (before the CONDLAB_SEED fallback).
        default_seed: Seed used when neither a seed nor CONDLAB_SEED is available.
        workers: Default number of joblib workers for Monte Carlo replicas.
        float_digits: Significant digits written for floats in CSV output. Default is 17.
    """
    updates = {k: v for k, v in locals().items() if v is not None}
    _global().update(updates)

@contextmanager
def using(
    rtol: float | None = None,
    atol: float | None = None,
    quadrature_nodes: int | None = None,
    quadrature_rtol: float | None = None,
    tail_method: TailMethod | None = None,
    series_rtol: float | None = None,
    series_max_terms: int | None = None,
    bisection_maxiter: int | None = None,
    generation_cap: int | None = None,
    renewal_warn_threshold: int | None = None,
    weight_tolerance: float | None = None,
    strict_weights: bool | None = None,
    seed: int | None = None,
    default_seed: int | None = None,
    workers: int | None = None,
    float_digits: int | None = None,
) -> Generator[None, None, None]:
    """
    Temporarily overrides the global condlab configuration within a context block.
    Safe for concurrent execution and asynchronous environments.

    Accepts the same keys as `config`.

    Examples:
        >>> import condlab as cl
        >>> with cl.using(tail_method="quadrature"):
        ...     cl.kingman.interval_mass(params, u, 50, 0.1)
    """
    ctx_var = _context()
    current = ctx_var.get().copy()

    updates = {k: v for k, v in locals().items() if k not in ("ctx_var", "current") and v is not None}
    token = ctx_var.set({**current, **updates})
    try:
        yield
    finally:
        ctx_var.reset(token)

def get_config(key: str, field_override: Any | None = None) -> Any:
    """
    Resolves the configuration value based on the precedence hierarchy:
    explicit argument > context override > global setting.
    """
    if field_override is not None:
        return field_override

    ctx_dict = _context().get()
    if key in ctx_dict:
        return ctx_dict[key]

    return _global().get(key)

def reset_config() -> None:
    """Restores every global setting to its shipped default."""
    glb = _global()
    glb.clear()
    glb.update(_DEFAULTS)
