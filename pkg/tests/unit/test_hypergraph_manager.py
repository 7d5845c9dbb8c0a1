import numpy as np
import pytest

from src.interactor.business_logic import hypergraph_manager
from src.interactor.business_logic.hypergraph_manager import HypergraphManager, log_log_slope
from src.shared.config.app_config import AppConfig


@pytest.fixture
def manager():
    return HypergraphManager(AppConfig(environment='development'))


class TestComputeStats:
    def test_binning_applies_to_null_model(self, manager, block_dataset, mocker):
        spy = mocker.spy(hypergraph_manager, 'homogeneity_values')
        result = manager.compute_stats([str(block_dataset)], null_seed=3, bin_homogeneity=True)
        assert result['success'], result.get('error')
        assert spy.call_count == 2
        # the second call measures the null model
        null_values = spy.spy_return
        null = result['summary']['null_model']
        assert null['mean_homogeneity'] == pytest.approx(np.floor(null_values + 0.5).mean())
        assert np.all(result['homogeneity'].values == np.round(result['homogeneity'].values))

    def test_unbinned_null_model(self, manager, block_dataset, mocker):
        spy = mocker.spy(hypergraph_manager, 'homogeneity_values')
        result = manager.compute_stats([str(block_dataset)], null_seed=3)
        assert result['success'], result.get('error')
        assert result['summary']['null_model']['mean_homogeneity'] == \
            pytest.approx(spy.spy_return.mean())
        assert result['summary']['homogeneity_binned'] is False

    def test_failure_is_reported(self, manager, tmp_path):
        result = manager.compute_stats([str(tmp_path / 'missing.txt')])
        assert result['success'] is False
        assert result['error_type'] == 'DatasetIOError'


class TestLogLogSlope:
    def test_linear_growth(self):
        assert log_log_slope([1, 10, 100], [2, 20, 200]) == pytest.approx(1.0)

    def test_needs_two_distinct_points(self):
        assert log_log_slope([5], [1.0]) is None
        assert log_log_slope([5, 5], [1.0, 2.0]) is None
