"""
Reproducible Random Streams.

Every Monte Carlo replica r of an experiment with master seed s draws from its own
generator ``numpy.random.default_rng([s, r])``. Replicas are evaluated in
contiguous batches (optionally on joblib workers) and merged back in replica order,
so results never depend on the number of workers.
"""
from __future__ import annotations

import os
from typing import Any, Callable, Sequence

import numpy as np

from .compat import HAS_JOBLIB, require_joblib
from .config import get_config
from ..exceptions import ParameterError
from .._typing import FloatArray, _ResultT

if HAS_JOBLIB:
    from joblib import Parallel, delayed

SEED_ENV = "CONDLAB_SEED"


def resolve_seed(seed: int | None = None) -> int:
    """
    Master seed by precedence: explicit argument > ``config(seed=...)`` >
    the ``CONDLAB_SEED`` environment variable > ``default_seed``.
    """
    chosen = get_config("seed", seed)
    if chosen is None:
        env = os.environ.get(SEED_ENV)
        if env is not None and env.strip():
            try:
                chosen = int(env.strip())
            except ValueError:
                raise ParameterError(SEED_ENV, env, "must be an integer") from None
    if chosen is None:
        chosen = get_config("default_seed")
    chosen = int(chosen)
    if chosen < 0:
        raise ParameterError("seed", chosen, "must be nonnegative")
    return chosen

def stream(master_seed: int, index: int) -> np.random.Generator:
    """The generator of replica ``index`` under ``master_seed``."""
    return np.random.default_rng([int(master_seed), int(index)])


class StreamFactory:
    """
    Hands out per-replica generators derived from one master seed.

    Examples:
        >>> streams = StreamFactory(7)
        >>> a = streams.stream(0).random()
        >>> b = StreamFactory(7).stream(0).random()
        >>> a == b
        True
    """
    def __init__(self, seed: int | None = None) -> None:
        self._seed: int | None = seed

    def seed(self, seed: int | None = None) -> None:
        """
        Reseeds the factory. With None, the seed is resolved lazily from the
        configuration and the environment at the next draw.
        """
        self._seed = seed

    @property
    def master_seed(self) -> int:
        return resolve_seed(self._seed)

    def stream(self, index: int = 0) -> np.random.Generator:
        return stream(self.master_seed, index)

    def streams(self, count: int, start: int = 0) -> list[np.random.Generator]:
        master = self.master_seed
        return [stream(master, r) for r in range(start, start + count)]


def _run_batch(
    task: Callable[..., _ResultT], master_seed: int, indices: Sequence[int], args: tuple[Any, ...]
) -> list[_ResultT]:
    return [task(stream(master_seed, r), *args) for r in indices]

def run_replicas(
    task: Callable[..., _ResultT],
    replicas: int,
    *args: Any,
    seed: int | None = None,
    workers: int | None = None,
) -> list[_ResultT]:
    """
    Evaluates ``task(rng, *args)`` for replicas 0..R-1 and returns the results in replica order.

    Args:
        task: A module-level function (it is shipped to worker processes).
        replicas: Number of independent replicas R.
        *args: Extra positional arguments passed to every call.
        seed: Master seed; resolved with `resolve_seed`.
        workers: Number of joblib workers; defaults to the ``workers`` setting.
    """
    if replicas < 1:
        raise ParameterError("replicas", replicas, "need at least one replica")
    master = resolve_seed(seed)
    n_jobs = int(get_config("workers", workers))
    if n_jobs < 1:
        raise ParameterError("workers", n_jobs, "need at least one worker")
    n_jobs = min(n_jobs, replicas)
    if n_jobs == 1:
        return _run_batch(task, master, range(replicas), args)

    require_joblib()
    batches = [b.tolist() for b in np.array_split(np.arange(replicas), n_jobs)]
    chunks = Parallel(n_jobs=n_jobs)(delayed(_run_batch)(task, master, b, args) for b in batches)
    return [item for chunk in chunks for item in chunk]

def replica_matrix(results: Sequence[Any]) -> FloatArray:
    """Stacks per-replica result vectors into a (replicas × points) array."""
    return np.vstack([np.atleast_1d(np.asarray(r, dtype=float)) for r in results])


_factory = StreamFactory()

seed = _factory.seed
default_stream = _factory.stream
