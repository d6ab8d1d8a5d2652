"""Splitting trees, their jumping chronological contour process (JCCP) and the discrete skewer.

Each table is a line whose length is the lifetime of its birth–death population (death rate m,
birth rate m - 1/2). Children start with one customer at Poisson rate 1/2 along the line and
sit immediately to the right of their parent, the newest one leftmost. The JCCP visits tables in
depth-first order with children taken newest first; it jumps from a table's birth level by the
table's lifetime and drifts down at unit speed in between.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from skewer_lab.chains.crp import ChainTrace, CrpConfig, CrpParams
from skewer_lab.chains.trees import ChainError
from skewer_lab.kernels import _numba
from skewer_lab.kernels.samplers import draw_seed

logger = logging.getLogger(__name__)

CHILD_RATE = 0.5
MAX_TABLES = 2_000_000


@dataclass
class TableNode:
    """One table: birth time, population path relative to birth, children ids."""

    table_id: int
    parent: Optional[int]
    birth: float
    times: np.ndarray
    pops: np.ndarray
    children: List[int] = field(default_factory=list)

    @property
    def lifetime(self) -> float:
        return float(self.times[-1])

    @property
    def death(self) -> float:
        return self.birth + self.lifetime

    def population_at(self, t: float) -> int:
        """Right-continuous population at absolute time ``t`` (0 outside the lifetime)."""
        rel = t - self.birth
        if rel < 0 or rel >= self.lifetime:
            return 0
        return int(self.pops[np.searchsorted(self.times, rel, side="right") - 1])


@dataclass
class SplittingTree:
    """Forest of tables; ``roots`` are the initial (or immigrant) tables, left to right."""

    nodes: Dict[int, TableNode]
    roots: List[int]
    params: CrpParams = CrpParams.HALF_ZERO

    def __len__(self) -> int:
        return len(self.nodes)

    def preorder(self) -> List[TableNode]:
        order: List[TableNode] = []
        for root in self.roots:
            stack = [root]
            while stack:
                node = self.nodes[stack.pop()]
                order.append(node)
                # newest child first in the visit order, so push oldest first
                stack.extend(sorted(node.children, key=lambda c: self.nodes[c].birth))
        return order


@dataclass(frozen=True)
class DiscreteJccp:
    """Jump times and levels of the contour, with the table carried by each jump."""

    times: np.ndarray
    levels_before: np.ndarray
    levels_after: np.ndarray
    spindles: Tuple[TableNode, ...]
    total_time: float

    def __len__(self) -> int:
        return len(self.spindles)

    def path_at(self, t: float) -> float:
        """Contour value at time ``t`` (right-continuous)."""
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        if i < 0:
            return 0.0
        return float(max(self.levels_after[i] - (t - self.times[i]), 0.0))


def birth_death_lifeline(m0: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Event times and populations of a birth–death table started at ``m0``."""
    if m0 <= 0:
        return np.zeros(1), np.zeros(1, dtype=np.int64)
    times, pops = _numba.birth_death_kernel(int(m0), draw_seed(rng))
    return np.asarray(times), np.asarray(pops)


def build_splitting_tree(
    params: CrpParams,
    rng: np.random.Generator,
    initial_tables: Sequence[int] = (1,),
    immigration_horizon: float = 0.0,
    max_tables: int = MAX_TABLES,
) -> SplittingTree:
    """Grow the splitting tree of the Poissonized oCRP from ``initial_tables``.

    For (1/2, 1/2) immigrant tables arrive at rate 1/2 on the far left up to
    ``immigration_horizon``; newer immigrants sit further left. The (1/2, -1/2) chain is built
    from its clock spindles in :mod:`skewer_lab.type2` instead.
    """
    if params is CrpParams.HALF_MINUS_HALF:
        raise ChainError("Splitting trees are built for (1/2, 0) and (1/2, 1/2) only")
    nodes: Dict[int, TableNode] = {}
    pending: List[Tuple[int, Optional[int], float, int]] = []
    roots: List[int] = []

    if params is CrpParams.HALF_HALF and immigration_horizon > 0:
        count = rng.poisson(CHILD_RATE * immigration_horizon)
        births = np.sort(rng.uniform(0.0, immigration_horizon, size=count))[::-1]
        for birth in births:
            roots.append(len(pending))
            pending.append((len(pending), None, float(birth), 1))
    for m in initial_tables:
        roots.append(len(pending))
        pending.append((len(pending), None, 0.0, int(m)))

    next_id = len(pending)
    while pending:
        table_id, parent, birth, m0 = pending.pop()
        times, pops = birth_death_lifeline(m0, rng)
        node = TableNode(table_id, parent, birth, times, pops)
        nodes[table_id] = node
        count = rng.poisson(CHILD_RATE * node.lifetime)
        for offset in rng.uniform(0.0, node.lifetime, size=count):
            node.children.append(next_id)
            pending.append((next_id, table_id, birth + float(offset), 1))
            next_id += 1
        if next_id > max_tables:
            raise ChainError(f"Splitting tree exceeded {max_tables} tables")
    logger.debug("Splitting tree with %d tables from %s", len(nodes), tuple(initial_tables))
    return SplittingTree(nodes, roots, params)


def to_jccp(tree: SplittingTree) -> DiscreteJccp:
    """Contour of ``tree``: jump by each lifetime at its birth level, drift -1 in between.

    Immigrant roots make the contour start at the highest immigrant birth level.
    """
    order = tree.preorder()
    times = np.empty(len(order))
    before = np.empty(len(order))
    after = np.empty(len(order))
    t = 0.0
    level = max(0.0, order[0].birth) if order else 0.0
    for i, node in enumerate(order):
        if node.birth > level + 1e-9:
            raise ChainError(f"Table {node.table_id} is born above the current contour level")
        t += level - node.birth
        times[i], before[i], after[i] = t, node.birth, node.death
        level = node.death
    t += level
    return DiscreteJccp(times, before, after, tuple(order), t)


def discrete_skewer(
    jccp: DiscreteJccp, y: float, params: CrpParams = CrpParams.HALF_ZERO
) -> CrpConfig:
    """Table populations alive at level ``y``, in contour order."""
    alive = (jccp.levels_before <= y) & (y < jccp.levels_after)
    pops = [jccp.spindles[i].population_at(y) for i in np.flatnonzero(alive)]
    return CrpConfig(tuple(p for p in pops if p > 0), params)


def splitting_tree_from_trace(trace: ChainTrace) -> SplittingTree:
    """Splitting tree of a recorded Poissonized run that went extinct."""
    nodes: Dict[int, TableNode] = {}
    for record in trace.tables.values():
        if record.death is None:
            raise ChainError(f"Table {record.table_id} is still alive at the end of the trace")
        times = np.asarray(record.times) - record.birth
        nodes[record.table_id] = TableNode(
            record.table_id, record.parent, record.birth, times, np.asarray(record.pops)
        )
    for node in nodes.values():
        if node.parent is not None:
            nodes[node.parent].children.append(node.table_id)
    roots = [i for i in trace.initial_ids]
    immigrants = sorted(
        (n for n in nodes.values() if n.parent is None and n.table_id not in roots),
        key=lambda n: -n.birth,
    )
    return SplittingTree(nodes, [n.table_id for n in immigrants] + roots, trace.params)
