from typing import List

import numpy as np

from src.shared.errors import InvalidLevelCount


def max_levels(num_nodes: int) -> int:
    """floor(log2 |V|), the largest usable level count (0 when |V| < 2)."""
    return max(int(num_nodes).bit_length() - 1, 0)


class LevelPartition:
    """Hierarchical node partition with ``2**(level-1)`` groups at each level.

    Nodes are laid out once in ``order``; every group at every level is a contiguous
    slice of that order. Group ``g`` (0-based) at level ``l`` spans
    ``[floor(n*g / 2**(l-1)), floor(n*(g+1) / 2**(l-1)))``, so the groups of level
    ``l`` are exactly the pairwise unions of adjacent groups of level ``l + 1``.
    """

    def __init__(self, num_nodes: int, num_levels: int, order: np.ndarray):
        if not 1 <= num_levels <= max_levels(num_nodes):
            raise InvalidLevelCount(num_levels, num_nodes)
        if len(order) != num_nodes:
            raise ValueError("Partition order must list every node exactly once")
        self.num_nodes = num_nodes
        self.num_levels = num_levels
        self.order = np.asarray(order, dtype=np.int64)
        self.order.setflags(write=False)
        self.position = np.empty(num_nodes, dtype=np.int64)
        self.position[self.order] = np.arange(num_nodes, dtype=np.int64)
        self.position.setflags(write=False)
        self._bounds = [self._compute_bounds(level) for level in range(1, num_levels + 1)]

    def _compute_bounds(self, level: int) -> np.ndarray:
        groups = 1 << (level - 1)
        bounds = (self.num_nodes * np.arange(groups + 1, dtype=np.int64)) // groups
        bounds.setflags(write=False)
        return bounds

    def num_groups(self, level: int) -> int:
        self._check_level(level)
        return 1 << (level - 1)

    def bounds(self, level: int) -> np.ndarray:
        """Group boundaries at ``level`` as positions into ``order`` (length groups + 1)."""
        self._check_level(level)
        return self._bounds[level - 1]

    def group_range(self, level: int, group: int) -> tuple:
        bounds = self.bounds(level)
        return int(bounds[group]), int(bounds[group + 1])

    def members(self, level: int, group: int) -> np.ndarray:
        start, end = self.group_range(level, group)
        return self.order[start:end]

    def group_of(self, level: int) -> np.ndarray:
        """Map node -> 0-based group index at ``level``."""
        bounds = self.bounds(level)
        return np.searchsorted(bounds, self.position, side='right') - 1

    def group_sizes(self, level: int) -> List[int]:
        return np.diff(self.bounds(level)).tolist()

    def _check_level(self, level: int) -> None:
        if not 1 <= level <= self.num_levels:
            raise ValueError(f"Level {level} outside 1..{self.num_levels}")

    def __repr__(self) -> str:
        return f"LevelPartition(num_nodes={self.num_nodes}, num_levels={self.num_levels})"


def make_partition(num_nodes: int, num_levels: int, rng: np.random.Generator) -> LevelPartition:
    """Shuffle the nodes uniformly and slice them into the hierarchical groups."""
    if not 1 <= num_levels <= max_levels(num_nodes):
        raise InvalidLevelCount(num_levels, num_nodes)
    return LevelPartition(num_nodes, num_levels, rng.permutation(num_nodes))
