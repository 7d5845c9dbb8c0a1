from src.interactor.measures.cooccurrence import (
    PairDegreeTable,
    TripleDegreeSample,
    homogeneity,
    homogeneity_distribution,
    pair_degrees,
    triple_degrees,
)
from src.interactor.measures.overlap import (
    BaselineKind,
    EgonetStat,
    baseline_measure,
    density,
    egonet_stats,
    overlapness,
)
from src.interactor.measures.significance import EgonetMeasure, significance

__all__ = [
    "BaselineKind",
    "EgonetMeasure",
    "EgonetStat",
    "PairDegreeTable",
    "TripleDegreeSample",
    "baseline_measure",
    "density",
    "egonet_stats",
    "homogeneity",
    "homogeneity_distribution",
    "overlapness",
    "pair_degrees",
    "significance",
    "triple_degrees",
]
