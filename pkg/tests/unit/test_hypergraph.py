import numpy as np
import pytest

from src.entity.models.distribution import DistributionSample
from src.entity.models.hypergraph import HyperedgeRecord, build_incidence
from src.shared.errors import EmptyEdge, EmptyInput, NodeOutOfRange


class TestHyperedgeRecord:
    def test_from_nodes_sorts_and_collapses(self):
        record = HyperedgeRecord.from_nodes([3, 1, 3, 2])
        assert record.nodes == (1, 2, 3)
        assert record.size == 3
        assert record.level is None

    def test_rejects_unsorted_nodes(self):
        with pytest.raises(ValueError):
            HyperedgeRecord((2, 1))

    def test_rejects_non_positive_level(self):
        with pytest.raises(ValueError):
            HyperedgeRecord((0, 1), level=0)

    def test_with_level(self):
        assert HyperedgeRecord((0, 1)).with_level(3).level == 3


class TestBuildIncidence:
    def test_degrees_of_two_edges(self):
        g = build_incidence([[0, 1], [1, 2]], 3)
        assert g.degrees.tolist() == [1, 2, 1]
        assert g.num_edges == 2

    def test_singleton(self):
        g = build_incidence([[0]], 1)
        assert g.degrees.tolist() == [1]
        assert g.sum_sizes == 1

    def test_degree_sum_matches_size_sum(self, toy_graph):
        assert int(toy_graph.degrees.sum()) == toy_graph.sum_sizes == 10

    def test_incidence_lists(self, toy_graph):
        assert toy_graph.incidence(1).tolist() == [0, 1, 2]
        assert toy_graph.incidence(4).tolist() == [3]
        for v in range(toy_graph.num_nodes):
            assert toy_graph.incidence(v).size == toy_graph.degrees[v]
            for i in toy_graph.incidence(v):
                assert v in toy_graph.edges[i].nodes

    def test_edge_nodes_matches_records(self, toy_graph):
        for i, edge in enumerate(toy_graph.edges):
            assert tuple(toy_graph.edge_nodes(i).tolist()) == edge.nodes

    def test_isolated_nodes_have_zero_degree(self):
        g = build_incidence([[0, 2]], 4)
        assert g.degrees.tolist() == [1, 0, 1, 0]
        assert g.incidence(1).size == 0

    def test_node_out_of_range(self):
        with pytest.raises(NodeOutOfRange) as exc:
            build_incidence([[0, 1], [1, 5]], 3)
        assert exc.value.node == 5
        assert exc.value.edge_index == 1

    def test_empty_edge(self):
        with pytest.raises(EmptyEdge) as exc:
            build_incidence([[0, 1], []], 2)
        assert exc.value.edge_index == 1

    def test_is_pure(self):
        edges = [[0, 1, 2], [2, 3]]
        assert build_incidence(edges, 4) == build_incidence(edges, 4)

    def test_arrays_are_read_only(self, toy_graph):
        with pytest.raises(ValueError):
            toy_graph.degrees[0] = 7

    def test_levels_are_kept(self):
        g = build_incidence([HyperedgeRecord((0, 1), 2), HyperedgeRecord((1, 2), 1)], 3)
        assert g.levels == [2, 1]

    def test_labels(self):
        g = build_incidence([[0, 1]], 2, labels=["alice", "bob"])
        assert g.label_of(1) == "bob"
        assert build_incidence([[0, 1]], 2).label_of(1) == "1"


class TestDistributionSample:
    def test_empty_is_rejected(self):
        with pytest.raises(EmptyInput):
            DistributionSample([])

    def test_non_finite_is_rejected(self):
        with pytest.raises(ValueError):
            DistributionSample([1.0, np.inf])

    def test_ecdf_is_right_continuous(self):
        sample = DistributionSample([3, 1, 2, 2])
        assert sample.ecdf([0, 1, 1.5, 2, 3, 10]).tolist() == [0, 0.25, 0.25, 0.75, 1.0, 1.0]

    def test_histogram(self):
        values, counts = DistributionSample([2, 1, 2]).histogram()
        assert values.tolist() == [1, 2]
        assert counts.tolist() == [1, 2]

    def test_binned_rounds_half_up(self):
        assert DistributionSample([1.4, 1.5, 2.49]).binned().values.tolist() == [1, 2, 2]

    def test_above_and_integral(self):
        sample = DistributionSample([1, 2, 3, 4])
        assert sample.above(3).tolist() == [3, 4]
        assert sample.is_integral()
        assert not DistributionSample([1.5]).is_integral()

    def test_summary(self):
        assert DistributionSample([1, 3]).summary() == {'count': 2, 'mean': 2.0, 'max': 3.0,
                                                         'min': 1.0}
