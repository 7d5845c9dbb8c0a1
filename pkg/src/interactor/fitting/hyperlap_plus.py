"""Greedy level-weight fitting for the multilevel generator.

Starting from a null-model generation (every edge at level 1), each level ``l = 2..L``
tries moving a growing fraction of the eligible level ``l - 1`` edges up to level ``l``
and keeps the fraction that brings the hyperedge homogeneity distribution closest to
the target. The sweep stops at the first level that brings no strict improvement.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import structlog

from src.entity.models.distribution import DistributionSample
from src.entity.models.generator_config import GeneratorConfig
from src.entity.models.hypergraph import Hypergraph, HyperedgeRecord, build_incidence
from src.entity.models.partition import LevelPartition, make_partition, max_levels
from src.interactor.generators.hypercl import hyper_cl
from src.interactor.generators.hyperlap import PARTITION_STREAM, HyperLapGenerator
from src.interactor.measures.cooccurrence import (
    DEFAULT_PAIR_CAPACITY,
    PairDegreeTable,
    edge_pair_keys,
    homogeneity_distribution,
    pair_keys_of,
)
from src.interactor.statistics.tailstats import ks_distance
from src.shared.errors import CapacityExceeded, InfeasibleSize, InvalidLevelCount, NoEligibleEdges
from src.shared.utils.rng import derive_rng

logger = structlog.get_logger(__name__)

FIT_STREAM = 3
ORDER_STREAM = 4


def hhd(target: Hypergraph, candidate: Hypergraph, threads: int = 1) -> float:
    """KS distance between the hyperedge homogeneity distributions of two hypergraphs."""
    return ks_distance(homogeneity_distribution(target, threads=threads),
                       homogeneity_distribution(candidate, threads=threads))


class PairCountIndex:
    """Pair counts and per-edge homogeneity of a hypergraph, with cheap what-if updates.

    ``candidate_homogeneity`` answers "what would every edge's homogeneity be if these
    edges were swapped for those node sets" without rebuilding the pair table: only the
    pair keys of the swapped edges change, so only edges sharing one of those pairs are
    recomputed.
    """

    def __init__(self, g: Hypergraph, capacity: int = DEFAULT_PAIR_CAPACITY):
        self.g = g
        self.pair_keys, self.pair_owner = edge_pair_keys(g)
        if self.pair_keys.size > capacity:
            raise CapacityExceeded(int(self.pair_keys.size), capacity, "node pairs")
        self.table = PairDegreeTable.from_keys(g.num_nodes, self.pair_keys)
        self.num_pairs = (g.sizes * (g.sizes - 1) // 2).astype(np.float64)
        counts = self.table.lookup(self.pair_keys).astype(np.float64)
        self.homogeneity = self._mean_per_edge(self.pair_owner, counts, self.num_pairs)
        self.homogeneity.setflags(write=False)

    @staticmethod
    def _mean_per_edge(owner: np.ndarray, counts: np.ndarray, num_pairs: np.ndarray) -> np.ndarray:
        sums = np.bincount(owner, weights=counts, minlength=num_pairs.size)
        return np.divide(sums, num_pairs, out=np.zeros(num_pairs.size), where=num_pairs > 0)

    def candidate_homogeneity(self, removed: np.ndarray, replacements: Sequence[np.ndarray]) -> np.ndarray:
        """Homogeneity of every edge after ``removed[j]`` is replaced by ``replacements[j]``."""
        n, m = self.g.num_nodes, self.g.num_edges
        removed = np.asarray(removed, dtype=np.int64)
        removed_edges = np.zeros(m, dtype=bool)
        removed_edges[removed] = True
        removed_pairs = removed_edges[self.pair_owner]

        added_keys, added_owner = pair_keys_of(replacements, n)
        old_keys = self.pair_keys[removed_pairs]
        delta_keys, inverse = np.unique(np.concatenate([old_keys, added_keys]), return_inverse=True)
        delta = np.bincount(inverse, weights=np.concatenate([-np.ones(old_keys.size),
                                                             np.ones(added_keys.size)]),
                            minlength=delta_keys.size)

        def updated_counts(keys: np.ndarray) -> np.ndarray:
            counts = self.table.lookup(keys).astype(np.float64)
            if delta_keys.size:
                pos = np.minimum(np.searchsorted(delta_keys, keys), delta_keys.size - 1)
                counts += np.where(delta_keys[pos] == keys, delta[pos], 0.0)
            return counts

        h = self.homogeneity.copy()

        changed = delta_keys[delta != 0]
        touched = np.isin(self.pair_keys, changed) & ~removed_pairs
        affected = np.unique(self.pair_owner[touched])
        if affected.size:
            affected_edges = np.zeros(m, dtype=bool)
            affected_edges[affected] = True
            selected = affected_edges[self.pair_owner]
            recomputed = self._mean_per_edge(self.pair_owner[selected],
                                             updated_counts(self.pair_keys[selected]), self.num_pairs)
            h[affected] = recomputed[affected]

        sizes = np.fromiter((len(e) for e in replacements), dtype=np.float64, count=len(replacements))
        h[removed] = self._mean_per_edge(added_owner, updated_counts(added_keys),
                                         sizes * (sizes - 1) / 2)
        return h


@dataclass
class Candidate:
    """``current`` with the edges at ``removed`` replaced by ``replacements`` at ``level``."""

    current: Hypergraph
    removed: np.ndarray
    replacements: List[np.ndarray]
    level: int
    fraction: float
    homogeneity: Optional[np.ndarray] = None

    def to_hypergraph(self) -> Hypergraph:
        records = list(self.current.edges)
        for index, nodes in zip(self.removed.tolist(), self.replacements):
            records[index] = HyperedgeRecord(tuple(nodes.tolist()), self.level)
        return build_incidence(records, self.current.num_nodes, self.current.labels)


@dataclass
class FitState:
    target: Hypergraph
    target_homogeneity: DistributionSample
    current: Hypergraph
    partition: LevelPartition
    generator: HyperLapGenerator
    p: float
    index: PairCountIndex
    current_hhd: float
    history: List[dict] = field(default_factory=list)

    @classmethod
    def start(cls, target: Hypergraph, current: Hypergraph, num_levels: int, p: float,
              seed: int, pair_capacity: int = DEFAULT_PAIR_CAPACITY) -> "FitState":
        partition = make_partition(target.num_nodes, num_levels, derive_rng(seed, PARTITION_STREAM))
        cfg = GeneratorConfig.from_hypergraph(target, levels=num_levels,
                                              weights=GeneratorConfig.uniform_weights(num_levels),
                                              seed=seed)
        target_homogeneity = homogeneity_distribution(target, capacity=pair_capacity)
        index = PairCountIndex(current, pair_capacity)
        return cls(
            target=target,
            target_homogeneity=target_homogeneity,
            current=current,
            partition=partition,
            generator=HyperLapGenerator(cfg, partition),
            p=p,
            index=index,
            current_hhd=ks_distance(target_homogeneity,
                                    DistributionSample(index.homogeneity, name="homogeneity")),
        )

    def eligible(self, level: int) -> np.ndarray:
        """Edges at level ``level - 1`` small enough to fit a group of ``level``."""
        levels = np.array([e.level or 1 for e in self.current.edges], dtype=np.int64)
        fits = self.current.sizes * (1 << (level - 1)) <= self.current.num_nodes
        return np.flatnonzero((levels == level - 1) & fits)

    def score(self, candidate: Candidate) -> float:
        if candidate.homogeneity is None:
            candidate.homogeneity = self.index.candidate_homogeneity(candidate.removed,
                                                                     candidate.replacements)
        return ks_distance(self.target_homogeneity,
                           DistributionSample(candidate.homogeneity, name="homogeneity"))

    def accept(self, candidate: Candidate, candidate_hhd: float, pair_capacity: int) -> None:
        self.current = candidate.to_hypergraph()
        self.index = PairCountIndex(self.current, pair_capacity)
        self.current_hhd = candidate_hhd

    def weights(self) -> List[float]:
        counts = np.bincount([e.level or 1 for e in self.current.edges],
                             minlength=self.partition.num_levels + 1)[1:]
        return (counts / counts.sum()).tolist()


def fractions(p: float) -> List[float]:
    """Candidate fractions p, 2p, ..., capped at 1."""
    if not 0 < p <= 1:
        raise ValueError(f"Update resolution must be in (0, 1], got {p}")
    steps = math.ceil(round(1.0 / p, 9))
    return [min(round(i * p, 12), 1.0) for i in range(1, steps + 1)]


def update_step(state: FitState, q: float, level: int, rng: np.random.Generator,
                order: Optional[np.ndarray] = None) -> Candidate:
    """Move ceil(q * eligible) level ``level - 1`` edges up to ``level``.

    ``order`` fixes which eligible edges go first, so removal sets are nested across
    fractions; without it the eligible edges are shuffled with ``rng``.
    """
    if not 2 <= level <= state.partition.num_levels:
        raise ValueError(f"Level {level} outside 2..{state.partition.num_levels}")
    if order is None:
        order = rng.permutation(state.eligible(level))
    if order.size == 0:
        raise NoEligibleEdges(level)

    count = math.ceil(round(q * order.size, 9))
    removed = np.sort(order[:count])
    replacements = [
        state.generator.draw_at_level(int(state.current.sizes[i]), level, rng)[0]
        for i in removed.tolist()
    ]
    return Candidate(current=state.current, removed=removed, replacements=replacements,
                     level=level, fraction=q)


@dataclass
class FitResult:
    hypergraph: Hypergraph
    weights: List[float]
    history: List[dict]
    report: Dict


def hyper_lap_plus(target: Hypergraph, p: float = 0.05, seed: int = 0, repeats: int = 1,
                   threads: int = 1, levels: Optional[int] = None,
                   pair_capacity: int = DEFAULT_PAIR_CAPACITY) -> FitResult:
    """Fit level weights to ``target`` and return the fitted hypergraph with its weights.

    ``repeats`` > 1 scores each fraction by the mean distance over that many
    regenerations and keeps the closest one.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    candidate_fractions = fractions(p)
    limit = max_levels(target.num_nodes)
    num_levels = limit if levels is None else levels
    if levels is not None and not 1 <= levels <= limit:
        raise InvalidLevelCount(levels, target.num_nodes)

    started = time.perf_counter()
    start = hyper_cl(GeneratorConfig.from_hypergraph(target, seed=seed), threads=threads)

    if num_levels < 2:
        initial = hhd(target, start, threads)
        logger.info("fit_skipped", reason="fewer than two levels", num_nodes=target.num_nodes)
        report = _report(initial, initial, [], [1.0], p, repeats, seed, max(num_levels, 1),
                         time.perf_counter() - started)
        return FitResult(hypergraph=start, weights=[1.0], history=[], report=report)

    state = FitState.start(target, start, num_levels, p, seed, pair_capacity)
    initial_hhd = state.current_hhd
    logger.info("fit_started", num_levels=num_levels, p=p, repeats=repeats, hhd=initial_hhd)

    level_reports = []
    for level in range(2, num_levels + 1):
        level_started = time.perf_counter()
        order = derive_rng(seed, ORDER_STREAM, level).permutation(state.eligible(level))

        def evaluate(i: int) -> dict:
            q = candidate_fractions[i - 1]
            scores, best, best_score = [], None, np.inf
            for r in range(repeats):
                rng = derive_rng(seed, FIT_STREAM, level, i, r)
                try:
                    candidate = update_step(state, q, level, rng, order)
                    score = state.score(candidate)
                except (NoEligibleEdges, InfeasibleSize):
                    candidate, score = None, np.inf
                scores.append(score)
                if score < best_score:
                    best, best_score = candidate, score
            return {'fraction': q, 'hhd': float(np.mean(scores)), 'best_hhd': float(best_score),
                    'candidate': best}

        indices = range(1, len(candidate_fractions) + 1)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                results = list(executor.map(evaluate, indices))
        else:
            results = [evaluate(i) for i in indices]

        # strict < keeps the smallest fraction on ties
        chosen = results[0]
        for result in results[1:]:
            if result['hhd'] < chosen['hhd']:
                chosen = result

        before = state.current_hhd
        accepted = chosen['candidate'] is not None and chosen['best_hhd'] < before
        if accepted:
            state.accept(chosen['candidate'], chosen['best_hhd'], pair_capacity)

        entry = {
            'level': level,
            'eligible': int(order.size),
            'accepted': accepted,
            'accepted_fraction': chosen['fraction'] if accepted else None,
            'hhd_before': before,
            'hhd_after': state.current_hhd,
            'seconds': time.perf_counter() - level_started,
            'candidates': [{'fraction': r['fraction'], 'hhd': r['hhd']} for r in results],
        }
        state.history.append({k: entry[k] for k in ('level', 'accepted_fraction', 'hhd_before',
                                                    'hhd_after', 'accepted')})
        level_reports.append(entry)
        logger.info("fit_level_done", level=level, accepted=accepted,
                    fraction=entry['accepted_fraction'], hhd=state.current_hhd,
                    seconds=round(entry['seconds'], 3))
        if not accepted:
            break

    weights = state.weights()
    report = _report(initial_hhd, state.current_hhd, level_reports, weights, p, repeats, seed,
                     num_levels, time.perf_counter() - started)
    return FitResult(hypergraph=state.current, weights=weights, history=state.history, report=report)


def _report(initial: float, final: float, level_reports: List[dict], weights: List[float],
            p: float, repeats: int, seed: int, num_levels: int, seconds: float) -> Dict:
    return {
        'initial_hhd': initial,
        'final_hhd': final,
        'num_levels': num_levels,
        'resolution': p,
        'repeats': repeats,
        'seed': seed,
        'weights': weights,
        'levels': level_reports,
        'seconds': seconds,
    }
