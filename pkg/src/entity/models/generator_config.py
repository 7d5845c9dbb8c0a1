from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from src.entity.models.hypergraph import Hypergraph
from src.entity.models.partition import max_levels
from src.shared.errors import InfeasibleSize, InvalidLevelCount, InvalidWeights

WEIGHT_TOLERANCE = 1e-9


@dataclass
class GeneratorConfig:
    sizes: List[int]
    degrees: List[float]
    levels: Optional[int] = None
    weights: Optional[List[float]] = None
    seed: int = 0
    retry_factor: int = 1000
    metadata: dict = field(default_factory=dict)

    @property
    def num_nodes(self) -> int:
        return len(self.degrees)

    @property
    def num_edges(self) -> int:
        return len(self.sizes)

    @classmethod
    def from_hypergraph(cls, g: Hypergraph, levels: Optional[int] = None,
                        weights: Optional[Sequence[float]] = None, seed: int = 0,
                        retry_factor: int = 1000) -> "GeneratorConfig":
        return cls(
            sizes=g.sizes.tolist(),
            degrees=g.degrees.tolist(),
            levels=levels,
            weights=list(weights) if weights is not None else None,
            seed=seed,
            retry_factor=retry_factor,
        )

    @staticmethod
    def uniform_weights(levels: int) -> List[float]:
        return [1.0 / levels] * levels

    def validate(self, multilevel: bool = False) -> bool:
        if any(s < 1 for s in self.sizes):
            raise ValueError("Every hyperedge size must be >= 1")
        if any(d < 0 or not np.isfinite(d) for d in self.degrees):
            raise ValueError("Every node degree weight must be finite and >= 0")

        positive = sum(1 for d in self.degrees if d > 0)
        largest = max(self.sizes, default=0)
        if largest > positive:
            raise InfeasibleSize(largest, positive)

        if multilevel:
            if self.levels is None or not 1 <= self.levels <= max_levels(self.num_nodes):
                raise InvalidLevelCount(self.levels or 0, self.num_nodes)
            if self.weights is None or len(self.weights) != self.levels:
                raise InvalidWeights(f"Expected {self.levels} level weights, got "
                                     f"{0 if self.weights is None else len(self.weights)}")
            if any(w < 0 for w in self.weights):
                raise InvalidWeights("Level weights must be non-negative")
            if abs(sum(self.weights) - 1.0) > WEIGHT_TOLERANCE:
                raise InvalidWeights(f"Level weights must sum to 1, got {sum(self.weights):.6g}")

        return True
