import pytest

from src.interactor.measures.significance import (
    EgonetMeasure,
    egonet_values,
    significance,
    significance_from_values,
)
from src.shared.errors import DegenerateDenominator, EmptyInput


class TestSignificanceFromValues:
    def test_separated_samples(self):
        assert significance_from_values([2, 2], [1, 1]) == 1.0

    def test_equal_means(self):
        assert significance_from_values([1, 3], [2, 2]) == 0.0

    def test_sign_follows_mean_difference(self):
        assert significance_from_values([1, 1], [2, 4]) < 0

    def test_bounded_by_one(self):
        value = significance_from_values([1, 5, 2], [0.5, 3, 4])
        assert -1.0 <= value <= 1.0

    def test_all_values_equal(self):
        with pytest.raises(DegenerateDenominator):
            significance_from_values([2, 2], [2])

    def test_empty(self):
        with pytest.raises(EmptyInput):
            significance_from_values([], [1.0])


class TestSignificance:
    @pytest.mark.parametrize("measure", list(EgonetMeasure))
    def test_self_comparison_is_zero(self, toy_graph, measure):
        assert significance(toy_graph, toy_graph, measure) == 0.0

    def test_overlapping_graph_scores_higher(self, make_graph):
        dense = make_graph([[0, 1, 2], [0, 1, 2, 3], [1, 2, 3]])
        sparse = make_graph([[0, 1], [2, 3], [4, 5]])
        assert significance(dense, sparse, EgonetMeasure.OVERLAPNESS) > 0

    def test_egonet_values(self, make_graph):
        values = egonet_values(make_graph([[0, 1], [0, 2]]), EgonetMeasure.DENSITY)
        assert values.tolist() == pytest.approx([2 / 3, 1 / 2, 1 / 2])
