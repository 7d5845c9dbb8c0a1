from enum import Enum
from typing import Sequence

import numpy as np

from src.entity.models.hypergraph import Hypergraph
from src.interactor.measures.overlap import egonet_stats
from src.shared.errors import DegenerateDenominator, EmptyInput


class EgonetMeasure(Enum):
    DENSITY = "density"
    OVERLAPNESS = "overlapness"


def egonet_values(g: Hypergraph, measure: EgonetMeasure, threads: int = 1) -> np.ndarray:
    return np.array([getattr(s, measure.value) for s in egonet_stats(g, threads)],
                    dtype=np.float64)


def significance_from_values(real: Sequence[float], null: Sequence[float]) -> float:
    """Mean difference scaled by the largest absolute cross difference of the two samples."""
    real = np.asarray(real, dtype=np.float64)
    null = np.asarray(null, dtype=np.float64)
    if real.size == 0 or null.size == 0:
        raise EmptyInput("Significance needs at least one egonet in each hypergraph")

    denominator = max(real.max() - null.min(), null.max() - real.min())
    if denominator == 0:
        raise DegenerateDenominator(
            "Every egonet value is identical across both hypergraphs; significance is undefined"
        )
    return float((real.mean() - null.mean()) / denominator)


def significance(g_real: Hypergraph, g_null: Hypergraph, measure: EgonetMeasure,
                 threads: int = 1) -> float:
    return significance_from_values(egonet_values(g_real, measure, threads),
                                    egonet_values(g_null, measure, threads))
