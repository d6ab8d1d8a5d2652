"""Aldous down-up chain on rooted binary trees and its 2-tree projection.

Trees are nested tuples: a leaf is its integer label, an internal node is a pair of subtrees.
Children are kept in canonical order (smaller minimum label first), so equal trees compare equal.
Internal nodes are identified by the set of leaves below them.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

Node = Union[int, tuple]
Path = Tuple[int, ...]

MAX_FULL_TREE_LEAVES = 12


class ChainError(ValueError):
    """Invalid chain state or move."""


class ChainDegenerated(ChainError):
    """A top mass died with no spinal mass left to promote."""


DEGENERATE = "degenerate"


def _min_leaf(node: Node) -> int:
    return node if isinstance(node, int) else min(_min_leaf(node[0]), _min_leaf(node[1]))


def _canonical(node: Node) -> Node:
    if isinstance(node, int):
        return node
    left, right = _canonical(node[0]), _canonical(node[1])
    return (left, right) if _min_leaf(left) < _min_leaf(right) else (right, left)


def leaf_set(node: Node) -> FrozenSet[int]:
    if isinstance(node, int):
        return frozenset((node,))
    return leaf_set(node[0]) | leaf_set(node[1])


@dataclass(frozen=True)
class BinaryTree:
    """Rooted binary tree with leaves labelled 1..n."""

    root: Node

    def __post_init__(self):
        object.__setattr__(self, "root", _canonical(self.root))
        labels = sorted(leaf_set(self.root))
        if labels != list(range(1, len(labels) + 1)):
            raise ChainError(f"Leaves must be labelled 1..n, got {labels}")
        if len(labels) > MAX_FULL_TREE_LEAVES:
            raise ChainError(f"Full trees are limited to {MAX_FULL_TREE_LEAVES} leaves")

    @property
    def n_leaves(self) -> int:
        return len(leaf_set(self.root))

    def edge_paths(self) -> List[Path]:
        """One path per edge: the edge above the node reached by following the path."""
        paths: List[Path] = []
        stack: List[Tuple[Node, Path]] = [(self.root, ())]
        while stack:
            node, path = stack.pop()
            paths.append(path)
            if not isinstance(node, int):
                stack.append((node[1], path + (1,)))
                stack.append((node[0], path + (0,)))
        return paths

    def internal_nodes(self) -> List[FrozenSet[int]]:
        out: List[FrozenSet[int]] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not isinstance(node, int):
                out.append(leaf_set(node))
                stack.extend(node)
        return out

    def find(self, leaves: FrozenSet[int]) -> Tuple[Node, List[Node]]:
        """Node with leaf set ``leaves`` and its ancestors, root first."""
        ancestors: List[Node] = []
        node = self.root
        while leaf_set(node) != leaves:
            if isinstance(node, int) or not leaves <= leaf_set(node):
                raise ChainError(f"No node with leaves {sorted(leaves)}")
            ancestors.append(node)
            node = node[0] if leaves <= leaf_set(node[0]) else node[1]
        return node, ancestors


def _insert(node: Node, path: Path, leaf: int) -> Node:
    if not path:
        return (node, leaf)
    children = list(node)
    children[path[0]] = _insert(children[path[0]], path[1:], leaf)
    return tuple(children)


def _remove(node: Node, leaf: int) -> Node:
    left, right = node
    if left == leaf:
        return right
    if right == leaf:
        return left
    if leaf in leaf_set(left):
        return (_remove(left, leaf), right)
    return (left, _remove(right, leaf))


def remove_leaf(tree: BinaryTree, leaf: int) -> Node:
    """Delete ``leaf`` and contract its parent; the result keeps the remaining labels."""
    return _remove(tree.root, leaf)


def _edge_paths(node: Node) -> List[Path]:
    paths: List[Path] = [()]
    if not isinstance(node, int):
        paths += [(0,) + p for p in _edge_paths(node[0])]
        paths += [(1,) + p for p in _edge_paths(node[1])]
    return paths


def aldous_downup_step(tree: BinaryTree, rng: np.random.Generator) -> BinaryTree:
    """Delete a uniform leaf and reinsert it on a uniform edge of the reduced tree."""
    n = tree.n_leaves
    if n < 3:
        raise ChainError(f"The down-up chain needs at least 3 leaves, got {n}")
    leaf = int(rng.integers(1, n + 1))
    reduced = remove_leaf(tree, leaf)
    paths = _edge_paths(reduced)
    path = paths[int(rng.integers(len(paths)))]
    return BinaryTree(_insert(reduced, path, leaf))


def enumerate_trees(n: int) -> List[BinaryTree]:
    """All (2n-3)!! rooted binary trees with n labelled leaves."""
    if n < 2:
        raise ChainError(f"Need at least 2 leaves, got {n}")
    shapes: List[Node] = [(1, 2)]
    for leaf in range(3, n + 1):
        shapes = [_insert(s, p, leaf) for s in shapes for p in _edge_paths(s)]
    return [BinaryTree(s) for s in shapes]


def aldous_transition_matrix(n: int) -> Tuple[List[BinaryTree], List[Dict[int, Fraction]]]:
    """Exact transition probabilities, as sparse rows keyed by column index."""
    trees = enumerate_trees(n)
    index = {t.root: i for i, t in enumerate(trees)}
    weight = Fraction(1, n * (2 * n - 3))
    rows: List[Dict[int, Fraction]] = []
    for tree in trees:
        row: Dict[int, Fraction] = {}
        for leaf in range(1, n + 1):
            reduced = remove_leaf(tree, leaf)
            for path in _edge_paths(reduced):
                j = index[_canonical(_insert(reduced, path, leaf))]
                row[j] = row.get(j, Fraction(0)) + weight
        rows.append(row)
    return trees, rows


def stationary_is_uniform(rows: List[Dict[int, Fraction]]) -> bool:
    """True iff the uniform law is invariant (every column sums to exactly 1)."""
    columns = [Fraction(0)] * len(rows)
    for row in rows:
        if sum(row.values()) != 1:
            return False
        for j, p in row.items():
            columns[j] += p
    return all(c == 1 for c in columns)


@dataclass(frozen=True)
class TwoTree:
    """Top masses and spinal masses, the spinal ones ordered from the branch point down."""

    m1: int
    m2: int
    spinal: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "spinal", tuple(int(b) for b in self.spinal))
        if self.m1 < 1 or self.m2 < 1 or any(b < 1 for b in self.spinal):
            raise ChainError(f"All 2-tree masses must be positive: {self}")

    @property
    def n(self) -> int:
        return self.m1 + self.m2 + sum(self.spinal)

    @property
    def k(self) -> int:
        return 2 + len(self.spinal)

    def masses(self) -> Tuple[int, ...]:
        return (self.m1, self.m2) + self.spinal


def project_two_tree(tree: BinaryTree, branch_point: FrozenSet[int]) -> TwoTree:
    """Project ``tree`` onto the 2-tree seen from the internal node with leaves ``branch_point``."""
    node, _ = tree.find(frozenset(branch_point))
    if isinstance(node, int):
        raise ChainError(f"Branch point {sorted(branch_point)} is a leaf")
    return project_tracked(tree, leaf_set(node[0]), leaf_set(node[1]))


def project_tracked(tree: BinaryTree, top1: FrozenSet[int], top2: FrozenSet[int]) -> TwoTree:
    """2-tree with labelled tops: ``top1`` gives m1 and ``top2`` gives m2."""
    node, ancestors = tree.find(top1 | top2)
    if isinstance(node, int) or {leaf_set(node[0]), leaf_set(node[1])} != {top1, top2}:
        raise ChainError("Tracked tops are not the two subtrees of one internal node")
    below = top1 | top2
    spinal: List[int] = []
    for ancestor in reversed(ancestors):
        left, right = ancestor
        sibling = right if below <= leaf_set(left) else left
        spinal.append(len(leaf_set(sibling)))
        below = leaf_set(ancestor)
    return TwoTree(len(top1), len(top2), tuple(spinal))


def projected_full_tree_transition(
    tree: BinaryTree, top1: FrozenSet[int], top2: FrozenSet[int]
) -> Dict[object, Fraction]:
    """Law of the projected 2-tree after one full-tree down-up move with tracked tops.

    A top subtree that loses its last leaf is replaced by the first spinal subtree.
    """
    n = tree.n_leaves
    out: Dict[object, Fraction] = {}
    b_node, ancestors = tree.find(top1 | top2)
    for leaf in range(1, n + 1):
        s1, s2 = top1 - {leaf}, top2 - {leaf}
        if not s1 or not s2:
            if not ancestors:
                out[DEGENERATE] = out.get(DEGENERATE, Fraction(0)) + Fraction(1, n)
                continue
            promoted = leaf_set(ancestors[-1]) - top1 - top2
            s1, s2 = (promoted, s2) if not s1 else (s1, promoted)
        reduced = remove_leaf(tree, leaf)
        paths = _edge_paths(reduced)
        weight = Fraction(1, n * len(paths))
        for path in paths:
            target = reduced
            for step in path:
                target = target[step]
            target_leaves = leaf_set(target)
            t1 = s1 | {leaf} if target_leaves <= s1 else s1
            t2 = s2 | {leaf} if target_leaves <= s2 else s2
            state = project_tracked(BinaryTree(_insert(reduced, path, leaf)), t1, t2)
            out[state] = out.get(state, Fraction(0)) + weight
    return out


def up_move_probabilities(
    state: TwoTree,
) -> Tuple[Fraction, Fraction, Tuple[Fraction, ...], Fraction]:
    """Insertion probabilities (m1, m2, each spinal mass, any new spinal mass) for ``state``."""
    total = 2 * state.n - 1
    return (
        Fraction(2 * state.m1 - 1, total),
        Fraction(2 * state.m2 - 1, total),
        tuple(Fraction(2 * b - 1, total) for b in state.spinal),
        Fraction(state.k - 1, total),
    )


def _down(masses: List[int], index: int) -> Optional[List[int]]:
    masses = list(masses)
    masses[index] -= 1
    if masses[index] > 0:
        return masses
    if index >= 2:
        return masses[:index] + masses[index + 1 :]
    if len(masses) == 2:
        return None
    # first spinal mass is promoted into the emptied top slot
    masses[index] = masses.pop(2)
    return masses


def _up_outcomes(masses: List[int]) -> Iterator[Tuple[List[int], int]]:
    """(new masses, weight) for every insertion; weights sum to 2n - 1."""
    for i, m in enumerate(masses):
        grown = list(masses)
        grown[i] += 1
        yield grown, 2 * m - 1
    for slot in range(len(masses) - 1):
        yield masses[: slot + 2] + [1] + masses[slot + 2 :], 1


def two_tree_transition(state: TwoTree) -> Dict[object, Fraction]:
    """Exact one-step law of the 2-tree down-up chain; degeneration is a terminal outcome."""
    n = state.n
    masses = list(state.masses())
    out: Dict[object, Fraction] = {}
    for i, m in enumerate(masses):
        p_down = Fraction(m, n)
        reduced = _down(masses, i)
        if reduced is None:
            out[DEGENERATE] = out.get(DEGENERATE, Fraction(0)) + p_down
            continue
        total = 2 * (n - 1) - 1
        for grown, w in _up_outcomes(reduced):
            nxt = TwoTree(grown[0], grown[1], tuple(grown[2:]))
            out[nxt] = out.get(nxt, Fraction(0)) + p_down * Fraction(w, total)
    return out


def two_tree_downup_step(state: TwoTree, rng: np.random.Generator) -> TwoTree:
    """One down-up move. Raises ``ChainDegenerated`` when a top dies with no spinal mass."""
    if state.n < 2:
        raise ChainError("The 2-tree chain needs at least 2 leaves")
    masses = list(state.masses())
    i = int(np.searchsorted(np.cumsum(masses), rng.integers(state.n), side="right"))
    reduced = _down(masses, i)
    if reduced is None:
        raise ChainDegenerated(f"Top mass died from {state}")
    outcomes = list(_up_outcomes(reduced))
    weights = np.array([w for _, w in outcomes], dtype=float)
    j = int(rng.choice(len(outcomes), p=weights / weights.sum()))
    grown = outcomes[j][0]
    return TwoTree(grown[0], grown[1], tuple(grown[2:]))


def check_projection_lumpable(n: int) -> List[Tuple[BinaryTree, FrozenSet[int], FrozenSet[int]]]:
    """Tracked full-tree states whose projected next-step law differs from the 2-tree chain."""
    mismatches = []
    for tree in enumerate_trees(n):
        for node_leaves in tree.internal_nodes():
            node, _ = tree.find(node_leaves)
            for top1, top2 in ((node[0], node[1]), (node[1], node[0])):
                t1, t2 = leaf_set(top1), leaf_set(top2)
                projected = projected_full_tree_transition(tree, t1, t2)
                direct = two_tree_transition(project_tracked(tree, t1, t2))
                if projected != direct:
                    mismatches.append((tree, t1, t2))
    logger.debug("Lumpability check for n=%d: %d mismatches", n, len(mismatches))
    return mismatches
