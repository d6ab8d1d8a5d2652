"""Per-path fan-out over a process pool with an ordered reduction."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, TypeVar

import numpy as np

from skewer_lab.kernels import path_stream
from skewer_lab.utils.config import worker_count

logger = logging.getLogger(__name__)

T = TypeVar("T")
PathFn = Callable[[np.random.Generator, Dict[str, Any]], T]

# paths per task
CHUNK = 16


def _run_chunk(fn: PathFn, seed: int, indices: List[int], params: Dict[str, Any]) -> List[Any]:
    return [fn(path_stream(seed, i), params) for i in indices]


def map_paths(
    fn: PathFn,
    n_paths: int,
    seed: int,
    params: Optional[Dict[str, Any]] = None,
    workers: Optional[int] = None,
) -> List[T]:
    """``fn(rng_i, params)`` for ``i < n_paths``, in path order.

    Path ``i`` always draws from the stream keyed by ``(seed, i)``, so the result does not
    depend on the number of workers. ``fn`` must be a module-level function.
    """
    params = dict(params or {})
    workers = workers or worker_count()
    chunks = [list(range(i, min(i + CHUNK, n_paths))) for i in range(0, n_paths, CHUNK)]
    if workers == 1 or len(chunks) <= 1:
        results = [_run_chunk(fn, seed, chunk, params) for chunk in chunks]
    else:
        logger.debug("Running %d paths of %s on %d workers", n_paths, fn.__name__, workers)
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_run_chunk, fn, seed, chunk, params) for chunk in chunks]
            results = [future.result() for future in futures]
    return [item for chunk in results for item in chunk]
