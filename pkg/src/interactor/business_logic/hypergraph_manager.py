import time
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import structlog

from src.entity.models.distribution import DistributionSample
from src.entity.models.generator_config import GeneratorConfig
from src.entity.models.hypergraph import Hypergraph
from src.entity.models.partition import max_levels
from src.entity.repositories.hypergraph_repository import DatasetFormat, HypergraphRepository
from src.interactor.fitting.hyperlap_plus import hyper_lap_plus
from src.interactor.generators.hypercl import hyper_cl_with_stats
from src.interactor.generators.hyperlap import hyper_lap_with_stats, upscale
from src.interactor.measures.cooccurrence import (
    PairDegreeTable,
    homogeneity_values,
    pair_degrees,
    triple_degrees,
)
from src.interactor.measures.overlap import egonet_stats
from src.interactor.measures.significance import EgonetMeasure, significance_from_values
from src.interactor.statistics.tailstats import evidence_summary, fit_tails, ks_distance
from src.shared.config.app_config import AppConfig
from src.shared.errors import DegenerateDenominator, EmptyInput
from src.shared.utils.rng import derive_rng

TRIPLE_STREAM = 5
DISTRIBUTIONS = ('pair', 'triple', 'homogeneity', 'degree', 'size')


class HypergraphManager:
    """Runs each toolkit operation and reports the outcome as a result dict.

    Every method returns ``{'success': True, ...}`` or
    ``{'success': False, 'error': ..., 'error_type': ...}``; nothing raises.
    """

    def __init__(self, app_config: Optional[AppConfig] = None, dedupe: bool = True,
                 drop_singletons: bool = True, threads: Optional[int] = None):
        self.config = app_config or AppConfig()
        self.repository = HypergraphRepository(dedupe=dedupe, drop_singletons=drop_singletons)
        self.threads = threads or self.config.threads
        self.logger = structlog.get_logger(__name__)

    def _failure(self, operation: str, e: Exception) -> Dict[str, Any]:
        self.logger.error("operation_failed", operation=operation, error=str(e),
                          error_type=type(e).__name__)
        return {
            'success': False,
            'error': str(e),
            'error_type': type(e).__name__,
        }

    def load(self, paths: Sequence[str], dataset_format: str = "edgelist") -> Hypergraph:
        return self.repository.load(list(paths), DatasetFormat(dataset_format))

    # ---- measures ------------------------------------------------------------

    def _triples(self, g: Hypergraph, mode: str, budget: Optional[int], seed: int):
        return triple_degrees(
            g,
            max_enum_size=self.config.triple_max_enum_size,
            sample_budget=budget or self.config.triple_sample_budget,
            rng=derive_rng(seed, TRIPLE_STREAM),
            force_sampled=(mode == 'sampled'),
        )

    def compute_stats(
        self,
        inputs: Sequence[str],
        dataset_format: str = "edgelist",
        triples_mode: str = "auto",
        budget: Optional[int] = None,
        null_seed: Optional[int] = None,
        bin_homogeneity: bool = False,
        seed: int = 0,
    ) -> Dict[str, Any]:
        try:
            g = self.load(inputs, dataset_format)
            egonets = egonet_stats(g, self.threads)
            pairs = pair_degrees(g, self.config.pair_capacity, self.threads)
            triples = self._triples(g, triples_mode, budget, seed)
            homogeneity = self._homogeneity(g, pairs, bin_homogeneity)

            summary = {
                'num_nodes': g.num_nodes,
                'num_edges': g.num_edges,
                'sum_sizes': g.sum_sizes,
                'max_size': g.max_size,
                'num_pairs': len(pairs),
                'triples': triples.describe(),
                'mean_egonet_density': float(np.mean([s.density for s in egonets])),
                'mean_egonet_overlapness': float(np.mean([s.overlapness for s in egonets])),
                'mean_homogeneity': float(homogeneity.mean()),
                'homogeneity_binned': bin_homogeneity,
            }

            if null_seed is not None:
                summary['null_model'] = self._null_comparison(g, egonets, null_seed, bin_homogeneity)

            return {
                'success': True,
                'hypergraph': g,
                'summary': summary,
                'egonets': egonets,
                'pair_degrees': pairs.distribution() if len(pairs) else None,
                'triple_degrees': triples.distribution() if triples.counts.size else None,
                'homogeneity': DistributionSample(homogeneity, name="homogeneity"),
            }

        except Exception as e:
            return self._failure("stats", e)

    def _homogeneity(self, g: Hypergraph, pairs: Optional[PairDegreeTable] = None,
                     binned: bool = False) -> np.ndarray:
        values = homogeneity_values(g, pairs, self.config.pair_capacity, self.threads)
        # round half up to the nearest integer bin
        return np.floor(values + 0.5) if binned else values

    def _null_comparison(self, g: Hypergraph, egonets, null_seed: int,
                         bin_homogeneity: bool = False) -> Dict[str, Any]:
        null = hyper_cl_with_stats(GeneratorConfig.from_hypergraph(
            g, seed=null_seed, retry_factor=self.config.retry_factor), self.threads).hypergraph
        null_egonets = egonet_stats(null, self.threads)
        null_homogeneity = self._homogeneity(null, binned=bin_homogeneity)

        def values(stats, measure: EgonetMeasure) -> List[float]:
            return [getattr(s, measure.value) for s in stats]

        def sig(measure: EgonetMeasure) -> Optional[float]:
            try:
                return significance_from_values(values(egonets, measure), values(null_egonets, measure))
            except DegenerateDenominator as e:
                self.logger.warning("significance_undefined", measure=measure.value, error=str(e))
                return None

        return {
            'seed': null_seed,
            'mean_egonet_density': float(np.mean(values(null_egonets, EgonetMeasure.DENSITY))),
            'mean_egonet_overlapness': float(np.mean(values(null_egonets, EgonetMeasure.OVERLAPNESS))),
            'mean_homogeneity': float(null_homogeneity.mean()),
            'sig_density': sig(EgonetMeasure.DENSITY),
            'sig_overlapness': sig(EgonetMeasure.OVERLAPNESS),
        }

    def distribution(self, g: Hypergraph, name: str, triples_mode: str = "auto",
                     budget: Optional[int] = None, seed: int = 0) -> DistributionSample:
        if name == 'pair':
            return pair_degrees(g, self.config.pair_capacity, self.threads).distribution()
        if name == 'triple':
            return self._triples(g, triples_mode, budget, seed).distribution()
        if name == 'homogeneity':
            return DistributionSample(self._homogeneity(g), name="homogeneity")
        if name == 'degree':
            return DistributionSample(g.degrees[g.degrees > 0], name="degree")
        if name == 'size':
            return DistributionSample(g.sizes, name="size")
        raise ValueError(f"Unknown distribution '{name}'; choose from {', '.join(DISTRIBUTIONS)}")

    def compare(self, inputs_a: Sequence[str], inputs_b: Sequence[str],
                dataset_format: str = "edgelist", triples_mode: str = "auto",
                budget: Optional[int] = None, seed: int = 0) -> Dict[str, Any]:
        try:
            a = self.load(inputs_a, dataset_format)
            b = self.load(inputs_b, dataset_format)

            ego_a, ego_b = egonet_stats(a, self.threads), egonet_stats(b, self.threads)
            d_stats = {}
            significance = {}
            for measure in EgonetMeasure:
                real = [getattr(s, measure.value) for s in ego_a]
                null = [getattr(s, measure.value) for s in ego_b]
                d_stats[f"egonet_{measure.value}"] = ks_distance(
                    DistributionSample(real), DistributionSample(null))
                try:
                    significance[measure.value] = significance_from_values(real, null)
                except DegenerateDenominator as e:
                    self.logger.warning("significance_undefined", measure=measure.value, error=str(e))
                    significance[measure.value] = None

            for name in DISTRIBUTIONS:
                try:
                    d_stats[name] = ks_distance(self.distribution(a, name, triples_mode, budget, seed),
                                                self.distribution(b, name, triples_mode, budget, seed))
                except EmptyInput as e:
                    self.logger.warning("distribution_empty", distribution=name, error=str(e))
                    d_stats[name] = None

            return {
                'success': True,
                'd_statistics': d_stats,
                'significance': significance,
                'inputs': {'first': list(inputs_a), 'second': list(inputs_b)},
            }

        except Exception as e:
            return self._failure("compare", e)

    def tail_fit(self, inputs: Sequence[str], dataset_format: str = "edgelist",
                 distribution: str = "pair", xmin: str = "min", integer_bins: bool = False,
                 triples_mode: str = "auto", budget: Optional[int] = None,
                 seed: int = 0) -> Dict[str, Any]:
        try:
            g = self.load(inputs, dataset_format)
            sample = self.distribution(g, distribution, triples_mode, budget, seed)
            if integer_bins:
                sample = sample.binned()
            result = fit_tails(sample, xmin=xmin)
            return {
                'success': True,
                'distribution': distribution,
                'fit': result,
                'verdict': evidence_summary(result),
            }

        except Exception as e:
            return self._failure("tailfit", e)

    # ---- generation ----------------------------------------------------------

    def generate(self, model: str, inputs: Optional[Sequence[str]] = None,
                 dataset_format: str = "edgelist", sizes: Optional[List[int]] = None,
                 degrees: Optional[List[float]] = None, levels: Optional[int] = None,
                 weights: Optional[List[float]] = None, seed: int = 0) -> Dict[str, Any]:
        """Generate from an exemplar hypergraph or from explicit size/degree lists."""
        try:
            if inputs:
                exemplar = self.load(inputs, dataset_format)
                sizes, degrees = exemplar.sizes.tolist(), exemplar.degrees.tolist()
            if not sizes or not degrees:
                raise ValueError("Provide an input hypergraph or both size and degree lists")

            cfg = GeneratorConfig(sizes=list(sizes), degrees=list(degrees), seed=seed,
                                  retry_factor=self.config.retry_factor)
            if model == 'hypercl':
                result = hyper_cl_with_stats(cfg, self.threads)
            else:
                if weights is not None:
                    levels = levels or len(weights)
                else:
                    levels = levels or max_levels(cfg.num_nodes)
                    weights = GeneratorConfig.uniform_weights(levels)
                cfg.levels, cfg.weights = levels, list(weights)
                result = hyper_lap_with_stats(cfg, threads=self.threads)

            return {
                'success': True,
                'hypergraph': result.hypergraph,
                'stats': result.stats.to_dict(),
                'generator': {'model': model, 'levels': cfg.levels, 'weights': cfg.weights,
                              'seed': seed},
            }

        except Exception as e:
            return self._failure("generate", e)

    def fit(self, inputs: Sequence[str], dataset_format: str = "edgelist",
            resolution: Optional[float] = None, repeats: Optional[int] = None,
            levels: Optional[int] = None, seed: int = 0) -> Dict[str, Any]:
        try:
            target = self.load(inputs, dataset_format)
            result = hyper_lap_plus(
                target,
                p=resolution or self.config.resolution,
                seed=seed,
                repeats=repeats or self.config.repeats,
                threads=self.threads,
                levels=levels,
                pair_capacity=self.config.pair_capacity,
            )
            return {
                'success': True,
                'hypergraph': result.hypergraph,
                'weights': result.weights,
                'report': result.report,
            }

        except Exception as e:
            return self._failure("fit", e)

    def upscale(self, inputs: Sequence[str], factor: int, dataset_format: str = "edgelist",
                levels: Optional[int] = None, weights: Optional[List[float]] = None,
                seed: int = 0) -> Dict[str, Any]:
        try:
            g = self.load(inputs, dataset_format)
            result = upscale(g, factor, levels, weights, seed, self.threads, self.config.retry_factor)
            return {
                'success': True,
                'hypergraph': result.hypergraph,
                'stats': result.stats.to_dict(),
                'factor': factor,
            }

        except Exception as e:
            return self._failure("upscale", e)

    def bench_point(self, g: Hypergraph, factor: int, levels: Optional[int] = None,
                    weights: Optional[List[float]] = None, seed: int = 0,
                    with_fit: bool = False, resolution: Optional[float] = None) -> Dict[str, Any]:
        """Time one upscaling (and optionally one fit of its output)."""
        try:
            result = upscale(g, factor, levels, weights, seed, self.threads, self.config.retry_factor)
            row = {
                'factor': factor,
                'num_edges': result.stats.num_edges,
                'sum_sizes': result.stats.sum_sizes,
                'seconds': result.stats.seconds,
            }
            if with_fit:
                started = time.perf_counter()
                hyper_lap_plus(result.hypergraph, p=resolution or self.config.resolution, seed=seed,
                               threads=self.threads, pair_capacity=self.config.pair_capacity)
                row['fit_seconds'] = time.perf_counter() - started
            return {'success': True, 'row': row}

        except Exception as e:
            return self._failure("bench", e)


def log_log_slope(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    """Least-squares slope of log(y) against log(x); None with fewer than two points."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    keep = (xs > 0) & (ys > 0)
    if keep.sum() < 2 or np.unique(xs[keep]).size < 2:
        return None
    slope, _ = np.polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)
    return float(slope)
