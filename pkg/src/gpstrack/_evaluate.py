"""Batch objective evaluation with optional thread parallelism.

Results are always returned in row order, so the number of workers never
changes what the optimisers see.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np


def evaluate(objective, X: np.ndarray, *, vectorized: bool = False, workers: int = 1) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if len(X) == 0:
        return np.empty(0)
    if vectorized:
        def call(chunk):
            return np.asarray(objective(chunk), dtype=float).reshape(len(chunk))
    else:
        def call(chunk):
            return np.array([float(objective(row)) for row in chunk])

    if workers <= 1 or len(X) == 1:
        return call(X)
    chunks = np.array_split(X, min(workers, len(X)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.concatenate(list(pool.map(call, chunks)))
