import time
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
import structlog

from src.entity.models.generator_config import GeneratorConfig
from src.entity.models.hypergraph import Hypergraph, HyperedgeRecord, build_incidence
from src.shared.utils.rng import derive_rng

logger = structlog.get_logger(__name__)

BLOCK_SIZE = 1024


@dataclass
class GenerationStats:
    num_nodes: int
    num_edges: int
    sum_sizes: int
    draws: int
    seconds: float
    level_counts: Dict[int, int] = field(default_factory=dict)

    @property
    def epsilon(self) -> float:
        """Collision overhead: extra draws per requested node slot."""
        return (self.draws - self.sum_sizes) / self.sum_sizes if self.sum_sizes else 0.0

    def to_dict(self) -> dict:
        return {
            'num_nodes': self.num_nodes,
            'num_edges': self.num_edges,
            'sum_sizes': self.sum_sizes,
            'draws': self.draws,
            'epsilon': self.epsilon,
            'seconds': self.seconds,
            'level_counts': {str(k): v for k, v in sorted(self.level_counts.items())},
        }


@dataclass
class GenerationResult:
    hypergraph: Hypergraph
    stats: GenerationStats


class EdgeGenerator(ABC):
    """Generates one hyperedge per requested size, in blocks of edges.

    Block ``b`` draws from its own substream of the seed, so the edge list is the same
    for every thread count.
    """

    stream: int = 0

    def __init__(self, cfg: GeneratorConfig):
        self.cfg = cfg

    @abstractmethod
    def draw_edge(self, size: int, rng: np.random.Generator) -> Tuple[np.ndarray, int, int]:
        """Return (sorted nodes, level, raw draws) for one hyperedge of ``size`` nodes."""

    def _generate_block(self, block: int) -> List[Tuple[np.ndarray, int, int]]:
        rng = derive_rng(self.cfg.seed, self.stream, block)
        start = block * BLOCK_SIZE
        sizes = self.cfg.sizes[start:start + BLOCK_SIZE]
        return [self.draw_edge(int(s), rng) for s in sizes]

    def generate(self, threads: int = 1) -> GenerationResult:
        started = time.perf_counter()
        num_blocks = -(-self.cfg.num_edges // BLOCK_SIZE)

        if threads > 1 and num_blocks > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                blocks = list(executor.map(self._generate_block, range(num_blocks)))
        else:
            blocks = [self._generate_block(b) for b in range(num_blocks)]

        records = []
        draws = 0
        level_counts: Dict[int, int] = {}
        for block in blocks:
            for nodes, level, spent in block:
                records.append(HyperedgeRecord(tuple(nodes.tolist()), level))
                draws += spent
                level_counts[level] = level_counts.get(level, 0) + 1

        g = build_incidence(records, self.cfg.num_nodes)
        stats = GenerationStats(
            num_nodes=g.num_nodes,
            num_edges=g.num_edges,
            sum_sizes=g.sum_sizes,
            draws=draws,
            seconds=time.perf_counter() - started,
            level_counts=level_counts,
        )
        logger.info("hypergraph_generated", generator=type(self).__name__,
                    num_edges=stats.num_edges, sum_sizes=stats.sum_sizes,
                    epsilon=round(stats.epsilon, 6), seconds=round(stats.seconds, 3),
                    threads=threads)
        return GenerationResult(hypergraph=g, stats=stats)
