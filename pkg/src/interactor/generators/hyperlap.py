from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
import structlog

from src.entity.models.generator_config import GeneratorConfig
from src.entity.models.hypergraph import Hypergraph
from src.entity.models.partition import LevelPartition, make_partition, max_levels
from src.interactor.generators.base import EdgeGenerator, GenerationResult
from src.interactor.generators.sampler import WeightedSampler
from src.shared.errors import InfeasibleSize, InvalidWeights
from src.shared.utils.rng import derive_rng

logger = structlog.get_logger(__name__)

PARTITION_STREAM = 1


def suitable_level(size: int, num_nodes: int, num_levels: int) -> int:
    """Largest level whose groups can hold ``size`` nodes: 2**(l-1) * size <= |V|, capped at L."""
    level = max((num_nodes // size).bit_length(), 1)
    return min(level, num_levels)


class HyperLapGenerator(EdgeGenerator):
    """Multilevel generator: each hyperedge picks a level by weight, a group of that
    level uniformly, then draws its nodes degree-proportionally inside the group."""

    stream = 2

    def __init__(self, cfg: GeneratorConfig, partition: Optional[LevelPartition] = None):
        cfg.validate(multilevel=True)
        super().__init__(cfg)
        if partition is None:
            partition = make_partition(cfg.num_nodes, cfg.levels,
                                       derive_rng(cfg.seed, PARTITION_STREAM))
        if partition.num_nodes != cfg.num_nodes or partition.num_levels != cfg.levels:
            raise ValueError(
                f"Partition ({partition.num_nodes} nodes, {partition.num_levels} levels) does not "
                f"match the generator ({cfg.num_nodes} nodes, {cfg.levels} levels)"
            )
        self.partition = partition
        self.weights = np.asarray(cfg.weights, dtype=np.float64)
        self.sampler = WeightedSampler(np.asarray(cfg.degrees, dtype=np.float64), partition.order)
        self.group_capacity = [
            np.diff(self.sampler.positive_prefix[partition.bounds(level)])
            for level in range(1, cfg.levels + 1)
        ]
        self._level_table = lru_cache(maxsize=None)(self._build_level_table)

    def level_probabilities(self, size: int) -> np.ndarray:
        """w_l / W_e for levels 1..L_e of a hyperedge with ``size`` nodes."""
        top = suitable_level(size, self.cfg.num_nodes, self.cfg.levels)
        suitable = self.weights[:top]
        total = suitable.sum()
        if total <= 0:
            raise InvalidWeights(f"Every level suitable for hyperedge size {size} has zero weight")
        return suitable / total

    def _build_level_table(self, size: int) -> np.ndarray:
        probabilities = self.level_probabilities(size)
        capacity = [int(self.group_capacity[l].max()) for l in range(probabilities.size)]
        if not any(p > 0 and c >= size for p, c in zip(probabilities, capacity)):
            available = max(c for p, c in zip(probabilities, capacity) if p > 0)
            raise InfeasibleSize(size, available)
        return np.cumsum(probabilities)

    def _draw_in_group(self, size: int, level: int, group: int,
                       rng: np.random.Generator) -> Tuple[np.ndarray, int]:
        start, end = self.partition.group_range(level, group)
        return self.sampler.draw_distinct(rng, size, start, end,
                                          budget=self.cfg.retry_factor * size)

    def draw_edge(self, size: int, rng: np.random.Generator) -> Tuple[np.ndarray, int, int]:
        cumulative = self._level_table(size)
        while True:
            index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side='right'))
            level = min(index, cumulative.size - 1) + 1
            group = int(rng.integers(1 << (level - 1)))
            # groups with too few positive-degree nodes are redrawn with their level
            if self.group_capacity[level - 1][group] >= size:
                break
        nodes, draws = self._draw_in_group(size, level, group, rng)
        return nodes, level, draws

    def draw_at_level(self, size: int, level: int, rng: np.random.Generator) -> Tuple[np.ndarray, int]:
        """One hyperedge forced to ``level``: uniform group, degree-proportional nodes."""
        capacity = self.group_capacity[level - 1]
        if capacity.max() < size:
            raise InfeasibleSize(size, int(capacity.max()))
        while True:
            group = int(rng.integers(capacity.size))
            if capacity[group] >= size:
                return self._draw_in_group(size, level, group, rng)


def hyper_lap_with_stats(cfg: GeneratorConfig, partition: Optional[LevelPartition] = None,
                         threads: int = 1) -> GenerationResult:
    return HyperLapGenerator(cfg, partition).generate(threads)


def hyper_lap(cfg: GeneratorConfig, partition: Optional[LevelPartition] = None,
              threads: int = 1) -> Hypergraph:
    return hyper_lap_with_stats(cfg, partition, threads).hypergraph


def upscale_config(g: Hypergraph, factor: int, levels: Optional[int] = None,
                   weights: Optional[Sequence[float]] = None, seed: int = 0,
                   retry_factor: int = 1000) -> GeneratorConfig:
    """Generator inputs for ``g`` tiled ``factor`` times: |V| * factor nodes, |E| * factor edges."""
    if factor < 1:
        raise ValueError(f"Upscaling factor must be >= 1, got {factor}")
    num_nodes = g.num_nodes * factor
    if weights is not None:
        levels = len(weights)
    else:
        levels = levels or max_levels(num_nodes)
        weights = GeneratorConfig.uniform_weights(levels)
    return GeneratorConfig(
        sizes=np.tile(g.sizes, factor).tolist(),
        degrees=np.tile(g.degrees, factor).tolist(),
        levels=levels,
        weights=list(weights),
        seed=seed,
        retry_factor=retry_factor,
        metadata={'upscale_factor': factor},
    )


def upscale(g: Hypergraph, factor: int, levels: Optional[int] = None,
            weights: Optional[Sequence[float]] = None, seed: int = 0,
            threads: int = 1, retry_factor: int = 1000) -> GenerationResult:
    cfg = upscale_config(g, factor, levels, weights, seed, retry_factor)
    logger.info("upscaling", factor=factor, num_nodes=cfg.num_nodes, num_edges=cfg.num_edges,
                levels=cfg.levels)
    return hyper_lap_with_stats(cfg, threads=threads)
