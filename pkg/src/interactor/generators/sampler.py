from typing import Optional

import numpy as np

from src.shared.errors import NonConvergence


class WeightedSampler:
    """Degree-proportional node draws over contiguous ranges of a node ordering.

    A single prefix-sum over ``weights[order]`` serves every range, so any group of a
    ``LevelPartition`` (a contiguous slice of its order) is sampled without building a
    per-group table. Zero-weight nodes occupy zero width and are never drawn.
    """

    def __init__(self, weights: np.ndarray, order: Optional[np.ndarray] = None):
        weights = np.asarray(weights, dtype=np.float64)
        self.order = np.arange(weights.size, dtype=np.int64) if order is None else np.asarray(order, dtype=np.int64)
        ordered = weights[self.order]
        self.cumulative = np.concatenate(([0.0], np.cumsum(ordered)))
        self.positive_prefix = np.concatenate(([0], np.cumsum(ordered > 0))).astype(np.int64)
        self.size = int(weights.size)

    def mass(self, start: int = 0, end: Optional[int] = None) -> float:
        end = self.size if end is None else end
        return float(self.cumulative[end] - self.cumulative[start])

    def positive_count(self, start: int = 0, end: Optional[int] = None) -> int:
        end = self.size if end is None else end
        return int(self.positive_prefix[end] - self.positive_prefix[start])

    def draw(self, rng: np.random.Generator, count: int, start: int = 0,
             end: Optional[int] = None) -> np.ndarray:
        """``count`` independent draws from positions [start, end), returned as node ids."""
        end = self.size if end is None else end
        u = rng.uniform(self.cumulative[start], self.cumulative[end], size=count)
        positions = np.searchsorted(self.cumulative, u, side='right') - 1
        positions = np.clip(positions, start, end - 1)
        return self.order[positions]

    def draw_distinct(self, rng: np.random.Generator, size: int, start: int = 0,
                      end: Optional[int] = None, budget: Optional[int] = None):
        """``size`` distinct nodes; duplicates are discarded and redrawn.

        Returns the sorted nodes and the number of raw draws spent.
        """
        budget = budget if budget is not None else 1000 * size
        chosen = set()
        draws = 0
        while len(chosen) < size:
            if draws >= budget:
                raise NonConvergence(size, draws)
            batch = min(size - len(chosen), budget - draws)
            draws += batch
            chosen.update(self.draw(rng, batch, start, end).tolist())
        return np.array(sorted(chosen), dtype=np.int64), draws
