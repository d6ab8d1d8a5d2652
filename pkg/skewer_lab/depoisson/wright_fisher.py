"""Three-mass projections and the Wright-Fisher(-1/2, -1/2, 1/2) reference built from BESQ paths."""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from skewer_lab.depoisson.resampling import TwoTreePath
from skewer_lab.depoisson.time_change import (
    DEFAULT_DU,
    DePoissonizationError,
    DePoissonizedPath,
    integrated_clock,
)
from skewer_lab.kernels.besq import DEFAULT_DT, sample_besq_path
from skewer_lab.type2 import (
    DEFAULT_DY,
    DEFAULT_N_APPROX,
    Type2Path,
    Type2State,
    sample_scaled_pdip,
    type2_deletion_clocking,
)

logger = logging.getLogger(__name__)

SIMPLEX_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ThreeMassPath:
    """Normalized ``(X1, X2, X3)`` on the grid ``u``; ``killed_at`` is when X1 or X2 hits 0."""

    u: np.ndarray
    values: np.ndarray
    killed_at: float

    def value_at(self, u: float) -> np.ndarray:
        if u > self.u[-1]:
            raise DePoissonizationError(f"Path recorded up to u={self.u[-1]}, queried at {u}")
        return np.array([np.interp(u, self.u, self.values[:, i]) for i in range(3)])


def project_3mass(path: Union[Type2Path, DePoissonizedPath, TwoTreePath]) -> np.ndarray:
    """``(m1, m2, ||alpha||)`` at every recorded point."""
    return path.three_mass()


def _check_simplex(x0: Sequence[float]) -> np.ndarray:
    x = np.asarray(x0, dtype=float)
    if x.shape != (3,) or np.any(x <= 0) or not math.isclose(x.sum(), 1.0, abs_tol=1e-6):
        raise DePoissonizationError(f"Starting point must lie in the open simplex, got {x0}")
    return x


def wf_reference(
    x0: Sequence[float],
    du: float,
    horizon: float,
    rng: np.random.Generator,
    dt: float = DEFAULT_DT,
) -> ThreeMassPath:
    """Normalize independent BESQ(-1), BESQ(-1), BESQ(1) paths from ``x0`` and time-change them.

    The path is reported up to ``horizon`` or the first time one of the first two vanishes.
    """
    x = _check_simplex(x0)
    du = du or DEFAULT_DU
    z1 = sample_besq_path(x[0], -1.0, dt, math.inf, rng)
    z2 = sample_besq_path(x[1], -1.0, dt, math.inf, rng)
    kill_level = min(z1.lifetime, z2.lifetime)
    n = int(math.floor(kill_level / dt))
    if n * dt >= kill_level:
        n -= 1
    levels = dt * np.arange(max(n, 0) + 1)
    z3 = sample_besq_path(x[2], 1.0, dt, float(levels[-1]), rng)
    raw = np.column_stack(
        (
            np.atleast_1d(z1.value_at(levels)),
            np.atleast_1d(z2.value_at(levels)),
            z3.values[: len(levels)],
        )
    )
    total = raw.sum(axis=1)
    clock = integrated_clock(levels, total)
    killed_at = float(clock[-1] + (kill_level - levels[-1]) / total[-1])
    end = min(horizon, killed_at)
    u = np.arange(0.0, end + 0.5 * du, du)
    u = u[u <= end]
    y = np.interp(u, clock, levels)
    normalized = raw / total[:, None]
    values = np.column_stack([np.interp(y, levels, normalized[:, i]) for i in range(3)])
    values[0] = x
    return ThreeMassPath(u, values, killed_at)


def intertwining_restart(
    state: Type2State,
    step: float,
    scale_unit: float,
    rng: np.random.Generator,
    n_approx: int = DEFAULT_N_APPROX,
    dy: float = DEFAULT_DY,
) -> Tuple[float, float, float]:
    """Three masses ``step`` levels after restarting with a fresh PDIP(1/2, 1/2) partition."""
    fresh = Type2State(
        state.m1, state.m2, sample_scaled_pdip(state.alpha.total_mass, 0.5, rng, n_approx)
    )
    if fresh.is_absorbed:
        return 0.0, 0.0, 0.0
    path = type2_deletion_clocking(
        fresh.m1, fresh.m2, fresh.alpha, scale_unit, rng, dy=dy, max_level=step
    )
    return path.state_at(step).three_mass()
