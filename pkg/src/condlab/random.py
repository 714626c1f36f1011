"""
Reproducible Random Streams Module.
Per-replica generators derived from one master seed, evaluated in worker-independent order.
"""
from .core.random import (
    StreamFactory, resolve_seed, stream, run_replicas, replica_matrix, seed, default_stream, SEED_ENV,
)

__all__ = ["StreamFactory", "resolve_seed", "stream", "run_replicas", "replica_matrix", "seed", "default_stream", "SEED_ENV"]
