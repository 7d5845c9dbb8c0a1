"""Heavy-tail model fitting and empirical-CDF comparisons.

Each tail model is fitted by maximum likelihood on the values at or above ``xmin``.
Integer data use discrete likelihoods, real-valued data continuous ones. Ratios are
raw log-likelihood differences against the exponential fitted to the same tail.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
import structlog
from scipy import optimize, special, stats

from src.entity.models.distribution import DistributionSample
from src.entity.models.tail_fit import (
    HEAVY_TAILED_MODELS,
    EvidenceVerdict,
    FitStatus,
    ModelFit,
    TailFitResult,
    TailModel,
)
from src.shared.errors import DegenerateData, EmptyInput, InsufficientTail

logger = structlog.get_logger(__name__)

MIN_TAIL = 10
ALPHA_MAX = 20.0
ALPHA_MIN = 1.0 + 1e-6
LAMBDA_MIN = 1e-10
LAMBDA_MAX = 1e2
SIGMA_MIN = 1e-3
SIGMA_MAX = 50.0
MU_MIN = -50.0
DISCRETE_HEAD_TERMS = 1000
MAX_XMIN_CANDIDATES = 100
TOL = 1e-8

XminPolicy = Union[str, float, int]


def ks_distance(a: DistributionSample, b: DistributionSample) -> float:
    """Largest absolute gap between two empirical CDFs, checked at every jump point."""
    if a.size == 0 or b.size == 0:
        raise EmptyInput("KS distance needs two non-empty samples")
    points = np.union1d(a.values, b.values)
    return float(np.max(np.abs(a.ecdf(points) - b.ecdf(points))))


@dataclass
class TailData:
    """Distinct tail values with multiplicities, plus the sufficient sums reused by every model."""

    values: np.ndarray
    counts: np.ndarray
    xmin: float
    discrete: bool

    @classmethod
    def from_values(cls, tail: np.ndarray, xmin: float, discrete: bool) -> "TailData":
        values, counts = np.unique(tail, return_counts=True)
        return cls(values=values, counts=counts.astype(np.float64), xmin=float(xmin),
                   discrete=discrete)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def sum_log(self) -> float:
        return float(np.dot(self.counts, np.log(self.values)))

    @property
    def sum_values(self) -> float:
        return float(np.dot(self.counts, self.values))

    @property
    def mean(self) -> float:
        return self.sum_values / self.n


# ---- log-likelihoods ---------------------------------------------------------

def _power_law_loglik(tail: TailData, alpha: float) -> float:
    if tail.discrete:
        return -alpha * tail.sum_log - tail.n * np.log(special.zeta(alpha, tail.xmin))
    return (tail.n * np.log((alpha - 1.0) / tail.xmin)
            - alpha * (tail.sum_log - tail.n * np.log(tail.xmin)))


def _exponential_loglik(tail: TailData, lam: float) -> float:
    excess = tail.sum_values - tail.n * tail.xmin
    if tail.discrete:
        # continuous density discretized over unit bins: a geometric law on x - xmin
        return -lam * excess + tail.n * np.log(-np.expm1(-lam))
    return tail.n * np.log(lam) - lam * excess


def _log_upper_gamma_tail(alpha: float, lam: float, start: float) -> float:
    """log of the integral of x^-alpha e^(-lam x) over [start, inf)."""
    upper = mpmath.gammainc(1.0 - alpha, lam * start)
    return float((alpha - 1.0) * mpmath.log(lam) + mpmath.log(upper))


def _truncated_log_norm(tail: TailData, alpha: float, lam: float) -> float:
    if not tail.discrete:
        return _log_upper_gamma_tail(alpha, lam, tail.xmin)

    head = tail.xmin + np.arange(DISCRETE_HEAD_TERMS, dtype=np.float64)
    log_head = special.logsumexp(-alpha * np.log(head) - lam * head)
    start = tail.xmin + DISCRETE_HEAD_TERMS
    # Euler-Maclaurin remainder for the terms past the explicit sum
    log_f = -alpha * np.log(start) - lam * start
    log_correction = log_f + np.log(0.5 + (alpha / start + lam) / 12.0)
    log_rest = np.logaddexp(_log_upper_gamma_tail(alpha, lam, start), log_correction)
    return float(np.logaddexp(log_head, log_rest))


def _truncated_power_law_loglik(tail: TailData, alpha: float, lam: float) -> float:
    return (-alpha * tail.sum_log - lam * tail.sum_values
            - tail.n * _truncated_log_norm(tail, alpha, lam))


def _log_interval_mass(lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """log(Phi(upper) - Phi(lower)) without cancellation in either tail."""
    right = lower > 0
    out = np.empty_like(lower)
    sf_lo, sf_hi = stats.norm.logsf(lower[right]), stats.norm.logsf(upper[right])
    out[right] = sf_lo + np.log1p(-np.exp(sf_hi - sf_lo))
    cdf_lo, cdf_hi = stats.norm.logcdf(lower[~right]), stats.norm.logcdf(upper[~right])
    out[~right] = cdf_hi + np.log1p(-np.exp(cdf_lo - cdf_hi))
    return out


def _log_normal_loglik(tail: TailData, mu: float, sigma: float) -> float:
    if tail.discrete:
        lower = (np.log(tail.values - 0.5) - mu) / sigma
        upper = (np.log(tail.values + 0.5) - mu) / sigma
        log_mass = _log_interval_mass(lower, upper)
        log_norm = stats.norm.logsf((np.log(tail.xmin - 0.5) - mu) / sigma)
        return float(np.dot(tail.counts, log_mass) - tail.n * log_norm)

    z = (np.log(tail.values) - mu) / sigma
    log_density = -np.log(tail.values) - np.log(sigma) - 0.5 * np.log(2 * np.pi) - 0.5 * z ** 2
    log_norm = stats.norm.logsf((np.log(tail.xmin) - mu) / sigma)
    return float(np.dot(tail.counts, log_density) - tail.n * log_norm)


_LOGLIKS: Dict[TailModel, Callable[..., float]] = {
    TailModel.POWER_LAW: _power_law_loglik,
    TailModel.TRUNCATED_POWER_LAW: _truncated_power_law_loglik,
    TailModel.LOG_NORMAL: _log_normal_loglik,
    TailModel.EXPONENTIAL: _exponential_loglik,
}

_PARAM_NAMES: Dict[TailModel, Tuple[str, ...]] = {
    TailModel.POWER_LAW: ("alpha",),
    TailModel.TRUNCATED_POWER_LAW: ("alpha", "lambda"),
    TailModel.LOG_NORMAL: ("mu", "sigma"),
    TailModel.EXPONENTIAL: ("lambda",),
}


def param_bounds(model: TailModel, tail: Optional[TailData] = None) -> Dict[str, Tuple[float, float]]:
    """Search region of each fitted parameter."""
    mu_max = float(np.log(tail.values[-1])) + 10.0 if tail is not None else 60.0
    bounds = {
        TailModel.POWER_LAW: {'alpha': (ALPHA_MIN, ALPHA_MAX)},
        TailModel.TRUNCATED_POWER_LAW: {'alpha': (ALPHA_MIN, ALPHA_MAX),
                                        'lambda': (LAMBDA_MIN, LAMBDA_MAX)},
        TailModel.LOG_NORMAL: {'mu': (MU_MIN, mu_max), 'sigma': (SIGMA_MIN, SIGMA_MAX)},
        TailModel.EXPONENTIAL: {'lambda': (0.0, np.inf)},
    }
    return bounds[model]


def log_likelihood(model: TailModel, params: Dict[str, float], tail: TailData) -> float:
    """Total log-likelihood of ``tail`` under ``model`` with the given parameters."""
    args = [params[name] for name in _PARAM_NAMES[model]]
    return float(_LOGLIKS[model](tail, *args))


# ---- fitting -----------------------------------------------------------------

def _checked(model: TailModel, params: Dict[str, float], tail: TailData) -> ModelFit:
    value = log_likelihood(model, params, tail)
    if not np.isfinite(value) or not all(np.isfinite(v) for v in params.values()):
        return ModelFit(model=model, params=params, log_likelihood=None,
                        status=FitStatus.FIT_FAILED, message="non-finite log-likelihood")
    return ModelFit(model=model, params=params, log_likelihood=value)


def _fit_power_law(tail: TailData) -> ModelFit:
    if not tail.discrete:
        alpha = 1.0 + tail.n / (tail.sum_log - tail.n * np.log(tail.xmin))
        return _checked(TailModel.POWER_LAW, {'alpha': float(alpha)}, tail)

    result = optimize.minimize_scalar(
        lambda a: -_power_law_loglik(tail, a),
        bounds=(ALPHA_MIN, ALPHA_MAX),
        method='bounded',
        options={'xatol': 1e-10},
    )
    return _checked(TailModel.POWER_LAW, {'alpha': float(result.x)}, tail)


def _fit_exponential(tail: TailData) -> ModelFit:
    excess = tail.mean - tail.xmin
    lam = np.log1p(1.0 / excess) if tail.discrete else 1.0 / excess
    return _checked(TailModel.EXPONENTIAL, {'lambda': float(lam)}, tail)


def _simplex_search(objective: Callable[[np.ndarray], float], starts: Iterable[Sequence[float]],
                    bounds: Sequence[Tuple[float, float]]) -> np.ndarray:
    """Bounded Nelder-Mead from every start, best result polished with L-BFGS-B."""

    def safe(x: np.ndarray) -> float:
        with np.errstate(all='ignore'):
            try:
                value = objective(x)
            except (ValueError, ZeroDivisionError, OverflowError):
                return np.inf
        return value if np.isfinite(value) else np.inf

    best_x, best_f = None, np.inf
    for start in starts:
        x0 = np.clip(np.asarray(start, dtype=np.float64), [b[0] for b in bounds], [b[1] for b in bounds])
        result = optimize.minimize(safe, x0, method='Nelder-Mead', bounds=bounds,
                                   options={'xatol': TOL, 'fatol': TOL, 'maxiter': 4000})
        if result.fun < best_f:
            best_x, best_f = result.x, result.fun

    if best_x is None:
        raise ArithmeticError("no start produced a finite log-likelihood")

    polished = optimize.minimize(safe, best_x, method='L-BFGS-B', bounds=bounds)
    if polished.fun < best_f:
        best_x = polished.x
    return best_x


def _fit_truncated_power_law(tail: TailData, alpha_hint: float) -> ModelFit:
    bounds = [(ALPHA_MIN, ALPHA_MAX), (np.log(LAMBDA_MIN), np.log(LAMBDA_MAX))]
    scale = max(tail.mean, 1.0)
    starts = [(a, np.log(lam))
              for a in (1.1, min(alpha_hint, 5.0), 2.5)
              for lam in (1e-6 / scale, 0.1 / scale, 1.0 / scale)]
    x = _simplex_search(lambda p: -_truncated_power_law_loglik(tail, p[0], np.exp(p[1])),
                        starts, bounds)
    return _checked(TailModel.TRUNCATED_POWER_LAW,
                    {'alpha': float(x[0]), 'lambda': float(np.exp(x[1]))}, tail)


def _fit_log_normal(tail: TailData) -> ModelFit:
    region = param_bounds(TailModel.LOG_NORMAL, tail)
    bounds = [region['mu'], (np.log(SIGMA_MIN), np.log(SIGMA_MAX))]
    logs = np.log(tail.values)
    mu0 = float(np.average(logs, weights=tail.counts))
    sigma0 = max(float(np.sqrt(np.average((logs - mu0) ** 2, weights=tail.counts))), 0.1)
    starts = [(mu0 + shift * sigma0, np.log(sigma0 * spread))
              for shift in (-4.0, -2.0, 0.0, 1.0)
              for spread in (0.5, 1.0, 2.0)]
    x = _simplex_search(lambda p: -_log_normal_loglik(tail, p[0], np.exp(p[1])), starts, bounds)
    return _checked(TailModel.LOG_NORMAL, {'mu': float(x[0]), 'sigma': float(np.exp(x[1]))}, tail)


def _guarded(model: TailModel, fit: Callable[[], ModelFit]) -> ModelFit:
    try:
        result = fit()
    except (ArithmeticError, ValueError, RuntimeError) as e:
        logger.warning("tail_model_fit_failed", model=model.value, error=str(e))
        return ModelFit(model=model, status=FitStatus.FIT_FAILED, message=str(e))
    if not result.ok:
        logger.warning("tail_model_fit_failed", model=model.value, error=result.message)
    return result


def _tail_data(data: Union[DistributionSample, Sequence[float]], xmin: float,
               discrete: Optional[bool]) -> TailData:
    sample = data if isinstance(data, DistributionSample) else DistributionSample(data)
    if discrete is None:
        discrete = sample.is_integral()
    if discrete and xmin < 1:
        raise DegenerateData(f"Discrete tail fitting needs xmin >= 1, got {xmin}")
    if xmin <= 0:
        raise DegenerateData(f"Tail fitting needs a positive xmin, got {xmin}")

    tail = sample.above(xmin)
    if tail.size < MIN_TAIL:
        raise InsufficientTail(int(tail.size), MIN_TAIL)
    if tail[0] == tail[-1]:
        raise DegenerateData(f"All {tail.size} tail values equal {tail[0]}; MLEs are undefined")
    return TailData.from_values(tail, xmin, discrete)


def fit_power_law(data: Union[DistributionSample, Sequence[float]], xmin: float,
                  discrete: Optional[bool] = None) -> ModelFit:
    """Pure power law on the tail; continuous data use the Hill estimator."""
    values = data.values if isinstance(data, DistributionSample) else np.sort(np.asarray(data, dtype=np.float64))
    tail = values[values >= xmin]
    if tail.size == 0:
        raise InsufficientTail(0, 1)
    if discrete is None:
        discrete = bool(np.all(tail == np.round(tail)))
    if tail[-1] == xmin:
        raise DegenerateData("Every tail value equals xmin; the power-law exponent is unbounded")
    return _fit_power_law(TailData.from_values(tail, xmin, discrete))


def _power_law_ks(tail: TailData, alpha: float) -> float:
    empirical = np.cumsum(tail.counts) / tail.n
    if tail.discrete:
        model = 1.0 - special.zeta(alpha, tail.values + 1.0) / special.zeta(alpha, tail.xmin)
        return float(np.max(np.abs(empirical - model)))
    model = 1.0 - (tail.values / tail.xmin) ** (1.0 - alpha)
    before = np.concatenate([[0.0], empirical[:-1]])
    return float(max(np.max(np.abs(empirical - model)), np.max(np.abs(before - model))))


def select_xmin(data: DistributionSample, discrete: Optional[bool] = None) -> float:
    """Cutoff minimizing the KS distance between the tail and its fitted power law."""
    discrete = data.is_integral() if discrete is None else discrete
    positive = data.values[data.values >= (1.0 if discrete else np.finfo(float).tiny)]
    distinct = np.unique(positive)
    # each candidate must leave at least MIN_TAIL points and two distinct values
    counts_above = positive.size - np.searchsorted(positive, distinct, side='left')
    candidates = distinct[(counts_above >= MIN_TAIL) & (distinct < distinct[-1])]
    if candidates.size == 0:
        raise InsufficientTail(int(positive.size), MIN_TAIL)
    if candidates.size > MAX_XMIN_CANDIDATES:
        picks = np.unique(np.linspace(0, candidates.size - 1, MAX_XMIN_CANDIDATES).astype(int))
        candidates = candidates[picks]

    best_xmin, best_d = float(candidates[0]), np.inf
    for xmin in candidates:
        tail = TailData.from_values(positive[positive >= xmin], xmin, discrete)
        if tail.values.size < 2:
            continue
        fit = _fit_power_law(tail)
        if not fit.ok:
            continue
        d = _power_law_ks(tail, fit.params['alpha'])
        if d < best_d:
            best_xmin, best_d = float(xmin), d
    logger.debug("xmin_selected", xmin=best_xmin, ks=best_d, candidates=int(candidates.size))
    return best_xmin


def resolve_xmin(data: DistributionSample, policy: XminPolicy = "min",
                 discrete: Optional[bool] = None) -> float:
    if isinstance(policy, str):
        if policy == "min":
            positive = data.values[data.values > 0]
            if positive.size == 0:
                raise DegenerateData("Tail fitting needs positive values")
            return float(positive[0])
        if policy == "scan":
            return select_xmin(data, discrete)
        try:
            return float(policy)
        except ValueError:
            raise ValueError(f"Unknown xmin policy '{policy}'; use min, scan or a number")
    return float(policy)


def fit_tails(data: Union[DistributionSample, Sequence[float]], xmin: XminPolicy = "min",
              discrete: Optional[bool] = None) -> TailFitResult:
    """Fit all four tail models and compare each heavy-tailed one against the exponential.

    ``discrete`` defaults to whether every value is an integer.
    """
    sample = data if isinstance(data, DistributionSample) else DistributionSample(data)
    discrete = sample.is_integral() if discrete is None else discrete
    cutoff = resolve_xmin(sample, xmin, discrete)
    tail = _tail_data(sample, cutoff, discrete)

    exponential = _guarded(TailModel.EXPONENTIAL, lambda: _fit_exponential(tail))
    power_law = _guarded(TailModel.POWER_LAW, lambda: _fit_power_law(tail))
    alpha_hint = power_law.params.get('alpha', 2.0) if power_law.ok else 2.0
    fits = {
        TailModel.POWER_LAW: power_law,
        TailModel.TRUNCATED_POWER_LAW: _guarded(
            TailModel.TRUNCATED_POWER_LAW, lambda: _fit_truncated_power_law(tail, alpha_hint)),
        TailModel.LOG_NORMAL: _guarded(TailModel.LOG_NORMAL, lambda: _fit_log_normal(tail)),
        TailModel.EXPONENTIAL: exponential,
    }

    ratios: Dict[TailModel, Optional[float]] = {}
    for model in HEAVY_TAILED_MODELS:
        fit = fits[model]
        ratios[model] = (fit.log_likelihood - exponential.log_likelihood
                         if fit.ok and exponential.ok else None)

    logger.info("tails_fitted", name=sample.name or None, xmin=cutoff, n_tail=tail.n,
                discrete=discrete,
                ratios={m.value: (round(r, 4) if r is not None else None) for m, r in ratios.items()})
    return TailFitResult(xmin=cutoff, n_tail=tail.n, discrete=discrete, fits=fits, ratios=ratios)


def evidence_summary(result: Union[TailFitResult, Dict[TailModel, Optional[float]]]) -> EvidenceVerdict:
    """Whether any heavy-tailed model beats the exponential, and which one does best."""
    ratios = result.ratios if isinstance(result, TailFitResult) else result
    available = [(m, ratios[m]) for m in HEAVY_TAILED_MODELS if ratios.get(m) is not None]
    if not available:
        return EvidenceVerdict(any_heavy_tail_positive=False, best_model=None)
    best_model, _ = max(available, key=lambda item: item[1])
    return EvidenceVerdict(
        any_heavy_tail_positive=any(r > 0 for _, r in available),
        best_model=best_model,
    )
