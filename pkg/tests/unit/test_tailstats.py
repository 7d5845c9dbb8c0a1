import numpy as np
import pytest

from src.entity.models.distribution import DistributionSample
from src.entity.models.tail_fit import FitStatus, TailModel
from src.interactor.statistics.tailstats import (
    MIN_TAIL,
    TailData,
    evidence_summary,
    fit_power_law,
    fit_tails,
    ks_distance,
    log_likelihood,
    param_bounds,
    resolve_xmin,
    select_xmin,
)
from src.shared.errors import DegenerateData, InsufficientTail

PW, TPW, LOGN, EXP = (TailModel.POWER_LAW, TailModel.TRUNCATED_POWER_LAW,
                      TailModel.LOG_NORMAL, TailModel.EXPONENTIAL)


@pytest.fixture(scope="module")
def power_law_data(power_law_sample):
    return DistributionSample(power_law_sample(2.5, 1, 20_000, np.random.default_rng(42)))


@pytest.fixture(scope="module")
def geometric_data():
    return DistributionSample(np.random.default_rng(7).geometric(0.3, size=100_000))


@pytest.fixture(scope="module")
def log_normal_data():
    return DistributionSample(np.random.default_rng(8).lognormal(1.0, 0.8, size=3_000))


class TestKsDistance:
    def test_identical(self):
        assert ks_distance(DistributionSample([1, 2, 3]), DistributionSample([3, 2, 1])) == 0.0

    def test_fully_separated(self):
        assert ks_distance(DistributionSample([1]), DistributionSample([2])) == 1.0

    def test_partial_overlap(self):
        a, b = DistributionSample([1, 1, 2]), DistributionSample([1, 2, 2])
        assert ks_distance(a, b) == pytest.approx(1 / 3)

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            a = DistributionSample(rng.integers(0, 10, size=int(rng.integers(1, 30))))
            b = DistributionSample(rng.integers(0, 10, size=int(rng.integers(1, 30))))
            d = ks_distance(a, b)
            assert d == ks_distance(b, a)
            assert 0.0 <= d <= 1.0


class TestPowerLaw:
    def test_hill_estimator(self):
        fit = fit_power_law([1, 2, 4], xmin=1, discrete=False)
        assert fit.params['alpha'] == pytest.approx(1 + 3 / (np.log(2) + np.log(4)), rel=1e-9)

    def test_all_at_xmin(self):
        with pytest.raises(DegenerateData):
            fit_power_law([2, 2, 2], xmin=2)

    def test_discrete_recovers_exponent(self, power_law_data):
        fit = fit_power_law(power_law_data, xmin=1)
        assert 2.2 < fit.params['alpha'] < 3.0


class TestFitTails:
    def test_power_law_beats_exponential(self, power_law_data):
        result = fit_tails(power_law_data)
        assert result.discrete
        assert result.xmin == 1.0
        assert result.n_tail == power_law_data.size
        assert result.ratios[PW] > 0
        assert evidence_summary(result).any_heavy_tail_positive

    def test_geometric_data_favours_exponential(self, geometric_data):
        result = fit_tails(geometric_data)
        for model in (PW, TPW, LOGN):
            assert result.ratios[model] is not None
            assert result.ratios[model] < 0
        assert not evidence_summary(result).any_heavy_tail_positive

    @pytest.mark.slow
    def test_power_law_ratio_positive_across_trials(self, power_law_sample):
        positive = 0
        for trial in range(10):
            sample = power_law_sample(2.5, 1, 100_000, np.random.default_rng(100 + trial))
            ratio = fit_tails(DistributionSample(sample)).ratios[PW]
            positive += ratio is not None and ratio > 0
        assert positive >= 9

    @pytest.mark.slow
    def test_exponential_data_not_heavy_tailed_on_average(self):
        ratios = {model: [] for model in (PW, TPW, LOGN)}
        for trial in range(10):
            rng = np.random.default_rng(200 + trial)
            result = fit_tails(DistributionSample(rng.geometric(0.3, size=100_000)))
            for model in ratios:
                assert result.ratios[model] is not None
                ratios[model].append(result.ratios[model])
        for model, values in ratios.items():
            assert np.mean(values) < 0, model

    def test_ratios_are_differences_against_exponential(self, geometric_data):
        result = fit_tails(geometric_data)
        exp_ll = result.fits[EXP].log_likelihood
        for model, ratio in result.ratios.items():
            assert ratio == pytest.approx(result.fits[model].log_likelihood - exp_ll)
        assert EXP not in result.ratios

    def test_numeric_xmin(self, power_law_data):
        result = fit_tails(power_law_data, xmin="3")
        assert result.xmin == 3.0
        assert result.n_tail == power_law_data.above(3).size

    def test_to_dict(self, geometric_data):
        data = fit_tails(geometric_data).to_dict()
        assert set(data['models']) == {m.value for m in TailModel}
        assert set(data['ratios']) == {'power_law', 'truncated_power_law', 'log_normal'}

    def test_too_few_tail_values(self):
        with pytest.raises(InsufficientTail) as exc:
            fit_tails([1, 2, 3, 4, 5])
        assert exc.value.required == MIN_TAIL

    def test_constant_tail(self):
        with pytest.raises(DegenerateData):
            fit_tails([3] * 20)

    def test_discrete_xmin_below_one(self):
        with pytest.raises(DegenerateData):
            fit_tails(list(range(1, 30)), xmin=0.5, discrete=True)

    def test_failed_model_is_reported_not_raised(self, geometric_data, mocker):
        mocker.patch("src.interactor.statistics.tailstats._fit_log_normal",
                     side_effect=ArithmeticError("no convergence"))
        result = fit_tails(geometric_data)
        assert result.fits[LOGN].status is FitStatus.FIT_FAILED
        assert result.fits[LOGN].message == "no convergence"
        assert result.ratios[LOGN] is None
        assert result.ratios[PW] is not None


class TestLocalOptimality:
    @staticmethod
    def assert_local_optimum(model, fit, tail):
        bounds = param_bounds(model, tail)
        best = fit.log_likelihood
        for name, value in fit.params.items():
            low, high = bounds[name]
            for factor in (0.99, 1.01):
                params = dict(fit.params)
                params[name] = float(np.clip(value * factor, low, high))
                assert log_likelihood(model, params, tail) <= best + 1e-6, (model, name, factor)

    def test_discrete_models(self, power_law_data):
        result = fit_tails(power_law_data)
        tail = TailData.from_values(power_law_data.above(result.xmin), result.xmin, True)
        for model in (PW, TPW, LOGN, EXP):
            assert result.fits[model].ok
            self.assert_local_optimum(model, result.fits[model], tail)

    def test_continuous_models(self, log_normal_data):
        result = fit_tails(log_normal_data)
        assert not result.discrete
        tail = TailData.from_values(log_normal_data.above(result.xmin), result.xmin, False)
        for model in (PW, TPW, LOGN, EXP):
            assert result.fits[model].ok
            self.assert_local_optimum(model, result.fits[model], tail)


class TestXmin:
    def test_min_policy(self):
        assert resolve_xmin(DistributionSample([0, 2, 3]), "min") == 2.0

    def test_numeric_policies(self):
        sample = DistributionSample([1, 2, 3])
        assert resolve_xmin(sample, "2.5") == 2.5
        assert resolve_xmin(sample, 4) == 4.0

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            resolve_xmin(DistributionSample([1, 2]), "median")

    def test_scan_leaves_enough_tail(self, power_law_data):
        xmin = select_xmin(power_law_data)
        assert xmin >= 1
        assert power_law_data.above(xmin).size >= MIN_TAIL

    def test_scan_needs_data(self):
        with pytest.raises(InsufficientTail):
            select_xmin(DistributionSample([1, 2, 3]))


class TestEvidenceSummary:
    def test_truncated_power_law_wins(self):
        verdict = evidence_summary({PW: -0.36, TPW: 4.22, LOGN: 3.50})
        assert verdict.any_heavy_tail_positive
        assert verdict.best_model is TPW

    def test_all_negative(self):
        verdict = evidence_summary({PW: -1.0, TPW: -1.0, LOGN: -1.0})
        assert not verdict.any_heavy_tail_positive

    def test_argmax(self):
        assert evidence_summary({PW: 0.0, TPW: 0.0, LOGN: 0.1}).best_model is LOGN

    def test_failed_fits_are_skipped(self):
        verdict = evidence_summary({PW: None, TPW: -2.0, LOGN: None})
        assert verdict.best_model is TPW
        assert evidence_summary({PW: None, TPW: None, LOGN: None}).best_model is None

    def test_to_dict(self):
        assert evidence_summary({PW: 1.0, TPW: 0.5, LOGN: 0.2}).to_dict() == {
            'any_heavy_tail_positive': True, 'best_model': 'power_law'}
