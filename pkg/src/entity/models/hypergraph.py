from dataclasses import dataclass
from itertools import chain
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.shared.errors import EmptyEdge, NodeOutOfRange

NodeId = int


@dataclass(frozen=True)
class HyperedgeRecord:
    """One hyperedge: strictly increasing node ids plus the level it was generated at."""

    nodes: Tuple[NodeId, ...]
    level: Optional[int] = None

    def __post_init__(self):
        for a, b in zip(self.nodes, self.nodes[1:]):
            if a >= b:
                raise ValueError(f"Hyperedge nodes must be strictly increasing: {self.nodes}")
        if self.level is not None and self.level < 1:
            raise ValueError(f"Provenance level must be >= 1, got {self.level}")

    @classmethod
    def from_nodes(cls, nodes: Iterable[NodeId], level: Optional[int] = None) -> "HyperedgeRecord":
        return cls(tuple(sorted({int(v) for v in nodes})), level)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def with_level(self, level: Optional[int]) -> "HyperedgeRecord":
        return HyperedgeRecord(self.nodes, level)


EdgeLike = Union[HyperedgeRecord, Iterable[NodeId]]


class Hypergraph:
    """Immutable node/hyperedge incidence store.

    Incidence is kept in CSR form: the edges containing node ``v`` are
    ``incidence_indices[incidence_indptr[v]:incidence_indptr[v + 1]]`` in increasing order.
    """

    def __init__(self, num_nodes: int, edges: Tuple[HyperedgeRecord, ...], sizes: np.ndarray,
                 flat_nodes: np.ndarray, degrees: np.ndarray, incidence_indptr: np.ndarray,
                 incidence_indices: np.ndarray, labels: Optional[Tuple[str, ...]] = None):
        self.num_nodes = num_nodes
        self.edges = edges
        self.sizes = sizes
        self.flat_nodes = flat_nodes
        self.degrees = degrees
        self.incidence_indptr = incidence_indptr
        self.incidence_indices = incidence_indices
        self.labels = labels
        self.edge_offsets = np.concatenate(([0], np.cumsum(sizes))).astype(np.int64)
        for array in (sizes, flat_nodes, degrees, incidence_indptr, incidence_indices,
                      self.edge_offsets):
            array.setflags(write=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def sum_sizes(self) -> int:
        return int(self.sizes.sum())

    @property
    def max_size(self) -> int:
        return int(self.sizes.max()) if self.num_edges else 0

    @property
    def levels(self) -> List[Optional[int]]:
        return [e.level for e in self.edges]

    def incidence(self, v: NodeId) -> np.ndarray:
        return self.incidence_indices[self.incidence_indptr[v]:self.incidence_indptr[v + 1]]

    def edge_nodes(self, i: int) -> np.ndarray:
        return self.flat_nodes[self.edge_offsets[i]:self.edge_offsets[i + 1]]

    def label_of(self, v: NodeId) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def __len__(self) -> int:
        return self.num_edges

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.num_nodes == other.num_nodes and self.edges == other.edges

    def __hash__(self):
        return hash((self.num_nodes, self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"


def build_incidence(edges: Sequence[EdgeLike], num_nodes: int,
                    labels: Optional[Sequence[str]] = None) -> Hypergraph:
    """Build a Hypergraph from edges over the dense id range [0, num_nodes)."""
    records = []
    for index, edge in enumerate(edges):
        record = edge if isinstance(edge, HyperedgeRecord) else HyperedgeRecord.from_nodes(edge)
        if record.size == 0:
            raise EmptyEdge(index)
        records.append(record)

    sizes = np.fromiter((r.size for r in records), dtype=np.int64, count=len(records))
    total = int(sizes.sum())
    flat = np.fromiter(chain.from_iterable(r.nodes for r in records), dtype=np.int64, count=total)

    if total and (flat.min() < 0 or flat.max() >= num_nodes):
        bad = int(np.flatnonzero((flat < 0) | (flat >= num_nodes))[0])
        edge_index = int(np.searchsorted(np.cumsum(sizes), bad, side='right'))
        raise NodeOutOfRange(int(flat[bad]), num_nodes, edge_index)

    degrees = np.bincount(flat, minlength=num_nodes).astype(np.int64)
    edge_of = np.repeat(np.arange(len(records), dtype=np.int64), sizes)
    order = np.argsort(flat, kind='stable')
    indices = edge_of[order]
    indptr = np.concatenate(([0], np.cumsum(degrees))).astype(np.int64)

    return Hypergraph(
        num_nodes=num_nodes,
        edges=tuple(records),
        sizes=sizes,
        flat_nodes=flat,
        degrees=degrees,
        incidence_indptr=indptr,
        incidence_indices=indices,
        labels=tuple(labels) if labels is not None else None,
    )
