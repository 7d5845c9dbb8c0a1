from typing import Tuple

import numpy as np

from src.entity.models.generator_config import GeneratorConfig
from src.entity.models.hypergraph import Hypergraph
from src.interactor.generators.base import EdgeGenerator, GenerationResult
from src.interactor.generators.sampler import WeightedSampler


class HyperCLGenerator(EdgeGenerator):
    """Chung-Lu style null model: every node of every hyperedge is drawn with
    probability proportional to its degree, over the whole node set."""

    stream = 0

    def __init__(self, cfg: GeneratorConfig):
        cfg.validate()
        super().__init__(cfg)
        self.sampler = WeightedSampler(np.asarray(cfg.degrees, dtype=np.float64))

    def draw_edge(self, size: int, rng: np.random.Generator) -> Tuple[np.ndarray, int, int]:
        nodes, draws = self.sampler.draw_distinct(rng, size, budget=self.cfg.retry_factor * size)
        return nodes, 1, draws


def hyper_cl_with_stats(cfg: GeneratorConfig, threads: int = 1) -> GenerationResult:
    return HyperCLGenerator(cfg).generate(threads)


def hyper_cl(cfg: GeneratorConfig, threads: int = 1) -> Hypergraph:
    """Edges of the null model; each is stamped with level 1 (the whole node set)."""
    return hyper_cl_with_stats(cfg, threads).hypergraph
