from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np
import structlog

from src.entity.models.distribution import DistributionSample
from src.entity.models.hypergraph import Hypergraph, HyperedgeRecord
from src.shared.errors import CapacityExceeded, EmptyInput, MissingPair

logger = structlog.get_logger(__name__)

DEFAULT_PAIR_CAPACITY = 2 ** 31
DEFAULT_MAX_ENUM_SIZE = 100
DEFAULT_SAMPLE_BUDGET = 10 ** 7
SAMPLE_BATCH = 100_000


@lru_cache(maxsize=None)
def _pair_positions(k: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(k, 1)


@lru_cache(maxsize=None)
def _triple_positions(k: int) -> np.ndarray:
    return np.array(list(combinations(range(k), 3)), dtype=np.int64).reshape(-1, 3)


def _edge_rows(g: Hypergraph, edge_ids: np.ndarray, k: int) -> np.ndarray:
    """Node matrix (len(edge_ids) x k) for edges that all have size k."""
    return g.flat_nodes[g.edge_offsets[edge_ids][:, None] + np.arange(k)]


def _size_groups(g: Hypergraph, min_size: int,
                 edge_ids: Optional[np.ndarray] = None) -> Iterator[Tuple[int, np.ndarray]]:
    ids = np.arange(g.num_edges) if edge_ids is None else np.asarray(edge_ids, dtype=np.int64)
    sizes = g.sizes[ids]
    for k in np.unique(sizes):
        if k >= min_size:
            yield int(k), ids[sizes == k]


def pair_count_total(sizes: np.ndarray) -> int:
    sizes = np.asarray(sizes, dtype=np.int64)
    return int((sizes * (sizes - 1) // 2).sum())


def triple_count_total(sizes: np.ndarray) -> int:
    sizes = np.asarray(sizes, dtype=np.int64)
    return int((sizes * (sizes - 1) * (sizes - 2) // 6).sum())


def edge_pair_keys(g: Hypergraph, edge_ids: Optional[np.ndarray] = None,
                   threads: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """Encoded pair keys ``u * |V| + v`` (u < v) of every pair inside the given edges.

    Returns the keys and, aligned with them, the index of the edge each pair came from.
    """
    n = g.num_nodes

    def keys_for(group: Tuple[int, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
        k, ids = group
        rows = _edge_rows(g, ids, k)
        first, second = _pair_positions(k)
        keys = rows[:, first] * n + rows[:, second]
        owners = np.repeat(ids, first.size)
        return keys.ravel(), owners

    groups = list(_size_groups(g, 2, edge_ids))
    if not groups:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    if threads > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            parts = list(executor.map(keys_for, groups))
    else:
        parts = [keys_for(group) for group in groups]
    return (np.concatenate([p[0] for p in parts]).astype(np.int64),
            np.concatenate([p[1] for p in parts]).astype(np.int64))


def pair_keys_of(edges: Sequence[np.ndarray], num_nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Pair keys of loose node arrays (each sorted), with the list index each pair came from."""
    sizes = np.fromiter((len(e) for e in edges), dtype=np.int64, count=len(edges))
    keys, owners = [np.empty(0, dtype=np.int64)], [np.empty(0, dtype=np.int64)]
    for k in np.unique(sizes[sizes >= 2]):
        ids = np.flatnonzero(sizes == k)
        rows = np.stack([np.asarray(edges[i], dtype=np.int64) for i in ids])
        first, second = _pair_positions(int(k))
        keys.append((rows[:, first] * num_nodes + rows[:, second]).ravel())
        owners.append(np.repeat(ids, first.size))
    return np.concatenate(keys), np.concatenate(owners)


class PairDegreeTable:
    """Co-occurrence counts d(u, v) for every pair that shares at least one hyperedge."""

    def __init__(self, num_nodes: int, keys: np.ndarray, counts: np.ndarray):
        self.num_nodes = num_nodes
        self.keys = keys
        self.counts = counts
        self.keys.setflags(write=False)
        self.counts.setflags(write=False)

    @classmethod
    def from_keys(cls, num_nodes: int, keys: np.ndarray) -> "PairDegreeTable":
        unique, counts = np.unique(keys, return_counts=True)
        return cls(num_nodes, unique.astype(np.int64), counts.astype(np.int64))

    def encode(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return u * self.num_nodes + v

    def lookup(self, keys: np.ndarray) -> np.ndarray:
        """Counts for encoded keys; 0 where the pair never co-occurs."""
        keys = np.asarray(keys, dtype=np.int64)
        if self.keys.size == 0:
            return np.zeros(keys.shape, dtype=np.int64)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, self.keys.size - 1)
        found = self.keys[pos] == keys
        return np.where(found, self.counts[pos], 0)

    def get(self, u: int, v: int) -> int:
        return int(self.lookup(np.array([self.encode(u, v)]))[0])

    def items(self) -> Iterator[Tuple[Tuple[int, int], int]]:
        for key, count in zip(self.keys.tolist(), self.counts.tolist()):
            yield divmod(key, self.num_nodes), count

    def as_dict(self) -> Dict[Tuple[int, int], int]:
        return dict(self.items())

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def distribution(self) -> DistributionSample:
        return DistributionSample(self.counts, name="pair_degree")

    def __len__(self) -> int:
        return int(self.keys.size)


def pair_degrees(g: Hypergraph, capacity: int = DEFAULT_PAIR_CAPACITY,
                 threads: int = 1) -> PairDegreeTable:
    required = pair_count_total(g.sizes)
    if required > capacity:
        raise CapacityExceeded(required, capacity, "node pairs")
    keys, _ = edge_pair_keys(g, threads=threads)
    return PairDegreeTable.from_keys(g.num_nodes, keys)


def homogeneity(edge: HyperedgeRecord, pairs: PairDegreeTable) -> float:
    """Mean pair degree over the node pairs inside ``edge``; 0 for a singleton."""
    nodes = np.asarray(edge.nodes, dtype=np.int64)
    if nodes.size <= 1:
        return 0.0
    first, second = _pair_positions(nodes.size)
    keys = nodes[first] * pairs.num_nodes + nodes[second]
    counts = pairs.lookup(keys)
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        i = int(missing[0])
        raise MissingPair(int(nodes[first[i]]), int(nodes[second[i]]))
    return float(counts.mean())


def homogeneity_values(g: Hypergraph, pairs: Optional[PairDegreeTable] = None,
                       capacity: int = DEFAULT_PAIR_CAPACITY, threads: int = 1) -> np.ndarray:
    """Homogeneity of every hyperedge, in edge order."""
    keys, owners = edge_pair_keys(g, threads=threads)
    if pairs is None:
        required = keys.size
        if required > capacity:
            raise CapacityExceeded(required, capacity, "node pairs")
        pairs = PairDegreeTable.from_keys(g.num_nodes, keys)
    counts = pairs.lookup(keys).astype(np.float64)
    sums = np.bincount(owners, weights=counts, minlength=g.num_edges)
    npairs = (g.sizes * (g.sizes - 1) // 2).astype(np.float64)
    return np.divide(sums, npairs, out=np.zeros(g.num_edges), where=npairs > 0)


def homogeneity_distribution(g: Hypergraph, pairs: Optional[PairDegreeTable] = None,
                             capacity: int = DEFAULT_PAIR_CAPACITY,
                             threads: int = 1) -> DistributionSample:
    return DistributionSample(homogeneity_values(g, pairs, capacity, threads), name="homogeneity")


@dataclass
class TripleDegreeSample:
    mode: str
    triples: np.ndarray
    counts: np.ndarray
    sample_size: Optional[int] = None
    draws: Optional[int] = None
    reason: Optional[str] = None

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> Dict[Tuple[int, int, int], int]:
        return {tuple(t): int(c) for t, c in zip(self.triples.tolist(), self.counts.tolist())}

    def get(self, u: int, v: int, w: int) -> int:
        return self.as_dict().get(tuple(sorted((u, v, w))), 0)

    def distribution(self) -> DistributionSample:
        if self.counts.size == 0:
            raise EmptyInput("No node triples: every hyperedge has fewer than 3 nodes")
        return DistributionSample(self.counts, name="triple_degree")

    def describe(self) -> dict:
        return {
            'mode': self.mode,
            'distinct_triples': int(self.counts.size),
            'sample_size': self.sample_size,
            'draws': self.draws,
            'reason': self.reason,
        }


def _unique_rows(rows: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    if rows.size == 0:
        return rows.reshape(0, 3), np.empty(0, dtype=np.int64)
    if n < 2_000_000:
        keys = (rows[:, 0] * n + rows[:, 1]) * n + rows[:, 2]
        unique, index, counts = np.unique(keys, return_index=True, return_counts=True)
        return rows[index], counts.astype(np.int64)
    unique, counts = np.unique(rows, axis=0, return_counts=True)
    return unique, counts.astype(np.int64)


def _exact_triples(g: Hypergraph) -> TripleDegreeSample:
    parts = []
    for k, ids in _size_groups(g, 3):
        rows = _edge_rows(g, ids, k)
        parts.append(rows[:, _triple_positions(k)].reshape(-1, 3))
    rows = np.concatenate(parts) if parts else np.empty((0, 3), dtype=np.int64)
    triples, counts = _unique_rows(rows, g.num_nodes)
    return TripleDegreeSample(mode="exact", triples=triples, counts=counts)


def _triple_degree_lookup(g: Hypergraph, triples: np.ndarray) -> np.ndarray:
    """Number of hyperedges containing each (sorted) node triple.

    Scans the incidence of the lowest-degree node of each triple and tests the other
    two nodes by binary search over the globally sorted (edge, node) incidence keys.
    """
    n = g.num_nodes
    incidence_keys = np.repeat(np.arange(g.num_edges, dtype=np.int64), g.sizes) * n + g.flat_nodes
    degrees = g.degrees[triples]
    pivot_col = np.argmin(degrees, axis=1)
    pivot = triples[np.arange(len(triples)), pivot_col]
    others = np.sort(np.where(np.arange(3)[None, :] == pivot_col[:, None], -1, triples), axis=1)[:, 1:]

    span = g.degrees[pivot]
    owner = np.repeat(np.arange(len(triples)), span)
    starts = np.repeat(g.incidence_indptr[pivot], span)
    within = np.arange(owner.size) - np.repeat(np.cumsum(span) - span, span)
    edges = g.incidence_indices[starts + within]

    def contains(nodes: np.ndarray) -> np.ndarray:
        keys = edges * n + nodes
        pos = np.minimum(np.searchsorted(incidence_keys, keys), incidence_keys.size - 1)
        return incidence_keys[pos] == keys

    hit = contains(others[owner, 0]) & contains(others[owner, 1])
    return np.bincount(owner, weights=hit, minlength=len(triples)).astype(np.int64)


def _sampled_triples(g: Hypergraph, budget: int, rng: np.random.Generator,
                     reason: str) -> TripleDegreeSample:
    sizes = g.sizes.astype(np.int64)
    weights = (sizes * (sizes - 1) * (sizes - 2) // 6).astype(np.float64)
    draws = int(min(budget, weights.sum()))
    probabilities = weights / weights.sum()

    accepted = []
    remaining = draws
    while remaining > 0:
        batch = min(SAMPLE_BATCH, remaining)
        remaining -= batch
        edges = rng.choice(g.num_edges, size=batch, p=probabilities)
        k = sizes[edges]
        # three distinct positions inside each chosen edge
        i1 = np.floor(rng.random(batch) * k).astype(np.int64)
        i2 = np.floor(rng.random(batch) * (k - 1)).astype(np.int64)
        i2 += i2 >= i1
        lo, hi = np.minimum(i1, i2), np.maximum(i1, i2)
        i3 = np.floor(rng.random(batch) * (k - 2)).astype(np.int64)
        i3 += i3 >= lo
        i3 += i3 >= hi
        offsets = g.edge_offsets[edges]
        triples = np.sort(np.stack([g.flat_nodes[offsets + i1], g.flat_nodes[offsets + i2],
                                    g.flat_nodes[offsets + i3]], axis=1), axis=1)
        counts = _triple_degree_lookup(g, triples)
        # occurrences of a triple are proportional to its degree; thinning by 1/d
        # leaves a uniform draw over distinct triples
        keep = rng.random(batch) * counts < 1.0
        accepted.append(np.column_stack([triples[keep], counts[keep]]))

    rows = np.concatenate(accepted) if accepted else np.empty((0, 4), dtype=np.int64)
    triples, _ = _unique_rows(rows[:, :3], g.num_nodes)
    counts = _triple_degree_lookup(g, triples) if len(triples) else np.empty(0, dtype=np.int64)
    return TripleDegreeSample(mode="sampled", triples=triples, counts=counts,
                              sample_size=int(len(triples)), draws=draws, reason=reason)


def triple_degrees(g: Hypergraph, max_enum_size: int = DEFAULT_MAX_ENUM_SIZE,
                   sample_budget: int = DEFAULT_SAMPLE_BUDGET,
                   rng: Optional[np.random.Generator] = None,
                   force_sampled: bool = False) -> TripleDegreeSample:
    """Exact triple co-occurrence counts when enumeration is affordable, else a uniform sample."""
    required = triple_count_total(g.sizes)
    reason = None
    if force_sampled:
        reason = "sampled mode requested"
    elif g.max_size > max_enum_size:
        reason = f"largest hyperedge ({g.max_size}) exceeds max_enum_size ({max_enum_size})"
    elif required > sample_budget:
        reason = f"{required:,} triples exceed the enumeration budget ({sample_budget:,})"

    if reason is None or required == 0:
        return _exact_triples(g)

    logger.warning("triple_mode_downgraded", reason=reason, triples=required,
                   budget=sample_budget)
    rng = rng if rng is not None else np.random.default_rng(0)
    return _sampled_triples(g, sample_budget, rng, reason)
