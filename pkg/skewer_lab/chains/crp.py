"""Ordered Chinese restaurant processes and their Poissonized down-up chains.

Three parameter pairs are supported: (1/2, 0), (1/2, 1/2) and (1/2, -1/2). Tables are listed
left to right. In the (1/2, -1/2) case there is no insertion slot between the two leftmost
tables, and the leftmost pair is tracked by position.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from skewer_lab.chains.trees import ChainDegenerated, ChainError
from skewer_lab.kernels.samplers import grow_ordered_tables

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class CrpParams(str, Enum):
    """Supported (alpha, theta) pairs."""

    HALF_ZERO = "half_zero"
    HALF_HALF = "half_half"
    HALF_MINUS_HALF = "half_minus_half"

    @property
    def alpha(self) -> Fraction:
        return HALF

    @property
    def theta(self) -> Fraction:
        return {"half_zero": Fraction(0), "half_half": HALF, "half_minus_half": -HALF}[self.value]

    @property
    def no_gap_after_first(self) -> bool:
        return self is CrpParams.HALF_MINUS_HALF

    @classmethod
    def from_theta(cls, theta: float) -> "CrpParams":
        for params in cls:
            if float(params.theta) == float(theta):
                return params
        raise ChainError(f"Unsupported theta {theta}; expected 0, 1/2 or -1/2")


@dataclass(frozen=True)
class CrpConfig:
    """Table populations, left to right."""

    tables: Tuple[int, ...]
    params: CrpParams = CrpParams.HALF_ZERO

    def __post_init__(self):
        object.__setattr__(self, "tables", tuple(int(m) for m in self.tables))
        if any(m < 1 for m in self.tables):
            raise ChainError(f"Table populations must be positive: {self.tables}")

    @property
    def n(self) -> int:
        return sum(self.tables)

    @property
    def k(self) -> int:
        return len(self.tables)

    @property
    def no_gap_after_first(self) -> bool:
        return self.params.no_gap_after_first

    def with_tables(self, tables) -> "CrpConfig":
        return CrpConfig(tuple(tables), self.params)

    def slot_positions(self) -> List[int]:
        """Insertion indices for new tables (index i puts the new table before table i)."""
        k = self.k
        if self.params is CrpParams.HALF_MINUS_HALF:
            return list(range(2, k + 1))
        slots = list(range(1, k + 1))
        if self.params is CrpParams.HALF_HALF:
            slots.insert(0, 0)
        return slots

    def slot_weight(self, position: int) -> Fraction:
        """Weight of one slot: theta for the leftmost slot of (1/2, 1/2), alpha otherwise."""
        if position == 0 and self.params is CrpParams.HALF_HALF:
            return self.params.theta
        return self.params.alpha


def seating_probabilities(config: CrpConfig) -> List[Tuple[Tuple[str, int], Fraction]]:
    """Exact seating law of the next customer as ``((kind, index), probability)`` pairs.

    ``("join", i)`` joins table ``i``; ``("new", p)`` opens a table at insertion index ``p``.
    """
    if config.no_gap_after_first and config.k < 2:
        raise ChainError("(1/2, -1/2) seating needs at least two tables")
    if config.k == 0:
        return [(("new", 0), Fraction(1))]
    alpha, theta = config.params.alpha, config.params.theta
    denom = config.n + theta
    out: List[Tuple[Tuple[str, int], Fraction]] = [
        (("join", i), (m - alpha) / denom) for i, m in enumerate(config.tables)
    ]
    out += [(("new", p), config.slot_weight(p) / denom) for p in config.slot_positions()]
    return out


def _apply(config: CrpConfig, action: Tuple[str, int]) -> CrpConfig:
    kind, index = action
    tables = list(config.tables)
    if kind == "join":
        tables[index] += 1
    else:
        tables.insert(index, 1)
    return config.with_tables(tables)


def ocrp_seat(config: CrpConfig, rng: np.random.Generator) -> CrpConfig:
    """Seat one more customer."""
    options = seating_probabilities(config)
    probs = np.array([float(p) for _, p in options])
    choice = int(rng.choice(len(options), p=probs / probs.sum()))
    return _apply(config, options[choice][0])


def grow_ocrp(params: CrpParams, n: int, rng: np.random.Generator) -> Tuple[int, ...]:
    """Table populations of an oCRP after ``n`` customers.

    The (1/2, -1/2) restaurant starts from two singleton tables.
    """
    alpha, theta = float(params.alpha), float(params.theta)
    if params is CrpParams.HALF_MINUS_HALF:
        if n < 2:
            raise ChainError("(1/2, -1/2) restaurants start with two customers")
        return grow_ordered_tables(alpha, theta, n, rng, start=(1, 1), first_slot=2)
    return grow_ordered_tables(alpha, theta, n, rng)


def ocrp_downup_step(config: CrpConfig, rng: np.random.Generator) -> CrpConfig:
    """Remove a uniform customer, then reseat one."""
    tables = list(config.tables)
    i = int(np.searchsorted(np.cumsum(tables), rng.integers(config.n), side="right"))
    tables[i] -= 1
    if tables[i] == 0:
        del tables[i]
    reduced = config.with_tables(tables)
    if reduced.no_gap_after_first and reduced.k < 2:
        raise ChainDegenerated(f"Leftmost pair lost a table from {config.tables}")
    return ocrp_seat(reduced, rng)


def event_rates(config: CrpConfig) -> List[Tuple[Tuple[str, int], float]]:
    """Poissonized event rates: death m, birth m - 1/2 per table, 1/2 per new-table slot."""
    out: List[Tuple[Tuple[str, int], float]] = []
    for i, m in enumerate(config.tables):
        out.append((("death", i), float(m)))
        out.append((("birth", i), m - 0.5))
    for p in config.slot_positions():
        out.append((("new", p), float(config.slot_weight(p))))
    return out


def total_rate(config: CrpConfig) -> float:
    return sum(rate for _, rate in event_rates(config))


def expected_drift(config: CrpConfig) -> float:
    """Expected change of the total population per unit time."""
    births = sum(m - 0.5 for m in config.tables)
    slots = sum(float(config.slot_weight(p)) for p in config.slot_positions())
    return births + slots - config.n


def _sample_event(config: CrpConfig, rng: np.random.Generator) -> Tuple[Tuple[str, int], float]:
    events = event_rates(config)
    rates = np.array([r for _, r in events])
    total = rates.sum()
    elapsed = rng.exponential(1.0 / total)
    choice = int(np.searchsorted(np.cumsum(rates), rng.random() * total, side="right"))
    return events[min(choice, len(events) - 1)][0], float(elapsed)


def _apply_event(tables: List[int], event: Tuple[str, int]) -> Optional[int]:
    """Mutate ``tables``; returns the index of a removed table, if any."""
    kind, index = event
    if kind == "birth":
        tables[index] += 1
    elif kind == "death":
        tables[index] -= 1
        if tables[index] == 0:
            del tables[index]
            return index
    else:
        tables.insert(index, 1)
    return None


def poissonized_step(config: CrpConfig, rng: np.random.Generator) -> Tuple[CrpConfig, float]:
    """One Gillespie event of the Poissonized chain."""
    if config.k == 0:
        raise ChainError("Poissonized step from an empty configuration")
    event, elapsed = _sample_event(config, rng)
    tables = list(config.tables)
    _apply_event(tables, event)
    return config.with_tables(tables), elapsed


@dataclass
class TableRecord:
    """Lifeline of one table in a recorded run (unscaled times)."""

    table_id: int
    parent: Optional[int]
    birth: float
    times: List[float] = field(default_factory=list)
    pops: List[int] = field(default_factory=list)
    death: Optional[float] = None


@dataclass
class ChainTrace:
    """Event times, configurations after each event, and table lineage."""

    params: CrpParams
    times: List[float]
    configs: List[Tuple[int, ...]]
    tables: Dict[int, TableRecord]
    initial_ids: Tuple[int, ...]

    def config_at(self, t: float) -> CrpConfig:
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return CrpConfig(self.configs[max(i, 0)], self.params)

    def to_rows(self) -> List[Tuple[float, str]]:
        return [(t, ";".join(str(m) for m in c)) for t, c in zip(self.times, self.configs)]


def simulate_poissonized(
    config: CrpConfig, horizon: float, rng: np.random.Generator, max_events: int = 10**7
) -> ChainTrace:
    """Run the Poissonized chain up to ``horizon`` or extinction, recording table lineage.

    A table opened in the slot right of table ``i`` is recorded as a child of table ``i``;
    a table opened in the leftmost slot has no parent.
    """
    tables = list(config.tables)
    ids = list(range(len(tables)))
    records = {
        i: TableRecord(i, None, 0.0, [0.0], [m]) for i, m in zip(ids, tables)
    }
    next_id = len(tables)
    t = 0.0
    times, configs = [0.0], [tuple(tables)]
    for _ in range(max_events):
        if not tables:
            break
        current = config.with_tables(tables)
        event, elapsed = _sample_event(current, rng)
        if t + elapsed > horizon:
            break
        t += elapsed
        kind, index = event
        if kind == "new":
            parent = ids[index - 1] if index > 0 else None
            records[next_id] = TableRecord(next_id, parent, t, [t], [1])
            ids.insert(index, next_id)
            next_id += 1
            tables.insert(index, 1)
        else:
            table_id = ids[index]
            removed = _apply_event(tables, event)
            record = records[table_id]
            record.times.append(t)
            record.pops.append(tables[index] if removed is None else 0)
            if removed is not None:
                record.death = t
                del ids[index]
        times.append(t)
        configs.append(tuple(tables))
    else:
        raise ChainError(f"Chain did not finish within {max_events} events")
    logger.debug("Recorded %d events up to t=%.4f", len(times) - 1, t)
    return ChainTrace(config.params, times, configs, records, tuple(range(len(config.tables))))
