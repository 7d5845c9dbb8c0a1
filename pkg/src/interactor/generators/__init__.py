from src.interactor.generators.base import GenerationResult, GenerationStats
from src.interactor.generators.hypercl import HyperCLGenerator, hyper_cl, hyper_cl_with_stats
from src.interactor.generators.hyperlap import (
    HyperLapGenerator,
    hyper_lap,
    hyper_lap_with_stats,
    suitable_level,
    upscale,
)
from src.interactor.generators.sampler import WeightedSampler

__all__ = [
    "GenerationResult",
    "GenerationStats",
    "HyperCLGenerator",
    "HyperLapGenerator",
    "WeightedSampler",
    "hyper_cl",
    "hyper_cl_with_stats",
    "hyper_lap",
    "hyper_lap_with_stats",
    "suitable_level",
    "upscale",
]
