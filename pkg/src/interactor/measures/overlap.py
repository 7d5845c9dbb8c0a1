from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Hashable, Iterable, List, Sequence, Union

import numpy as np

from src.entity.models.hypergraph import Hypergraph, HyperedgeRecord
from src.shared.errors import EmptyInput

EdgeSet = Sequence[Union[HyperedgeRecord, Iterable[Hashable]]]


class BaselineKind(Enum):
    INTERSECTION = "intersection"
    UNION_INVERSE = "union_inverse"
    JACCARD = "jaccard"
    OVERLAP_COEFFICIENT = "overlap_coefficient"


@dataclass(frozen=True)
class EgonetStat:
    node: int
    num_edges: int
    num_distinct_nodes: int
    sum_sizes: int
    density: float
    overlapness: float

    def to_dict(self) -> dict:
        return asdict(self)


def _as_sets(edges: EdgeSet) -> List[frozenset]:
    sets = [frozenset(e.nodes if isinstance(e, HyperedgeRecord) else e) for e in edges]
    if not sets:
        raise EmptyInput("Overlap measures need at least one hyperedge")
    return sets


def density(edges: EdgeSet) -> float:
    """|E| / |union of E|."""
    sets = _as_sets(edges)
    return len(sets) / len(frozenset().union(*sets))


def overlapness(edges: EdgeSet) -> float:
    """Sum of hyperedge sizes over the number of distinct covered nodes.

    Equals the mean degree of the covered nodes inside the sub-hypergraph.
    """
    sets = _as_sets(edges)
    return sum(len(s) for s in sets) / len(frozenset().union(*sets))


def baseline_measure(kind: BaselineKind, edges: EdgeSet) -> float:
    sets = _as_sets(edges)
    intersection = len(frozenset.intersection(*sets))
    union = len(frozenset().union(*sets))

    if kind is BaselineKind.INTERSECTION:
        return float(intersection)
    if kind is BaselineKind.UNION_INVERSE:
        return 1.0 / union
    if kind is BaselineKind.JACCARD:
        return intersection / union
    if kind is BaselineKind.OVERLAP_COEFFICIENT:
        return intersection / min(len(s) for s in sets)
    raise ValueError(f"Unknown baseline measure: {kind}")


def _egonet_stat(g: Hypergraph, v: int) -> EgonetStat:
    incident = g.incidence(v)
    num_edges = int(incident.size)
    sum_sizes = int(g.sizes[incident].sum())
    members = np.concatenate([g.edge_nodes(i) for i in incident])
    distinct = int(np.unique(members).size)
    return EgonetStat(
        node=v,
        num_edges=num_edges,
        num_distinct_nodes=distinct,
        sum_sizes=sum_sizes,
        density=num_edges / distinct,
        overlapness=sum_sizes / distinct,
    )


def egonet_stats(g: Hypergraph, threads: int = 1) -> List[EgonetStat]:
    """One stat per node of positive degree, ordered by node id."""
    nodes = np.flatnonzero(g.degrees > 0).tolist()
    if threads <= 1 or len(nodes) < 2:
        return [_egonet_stat(g, v) for v in nodes]

    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(lambda v: _egonet_stat(g, v), nodes))
