from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional


class TailModel(Enum):
    POWER_LAW = "power_law"
    TRUNCATED_POWER_LAW = "truncated_power_law"
    LOG_NORMAL = "log_normal"
    EXPONENTIAL = "exponential"


HEAVY_TAILED_MODELS = (TailModel.POWER_LAW, TailModel.TRUNCATED_POWER_LAW, TailModel.LOG_NORMAL)


class FitStatus(Enum):
    OK = "ok"
    FIT_FAILED = "fit_failed"


@dataclass
class ModelFit:
    model: TailModel
    params: Dict[str, float] = field(default_factory=dict)
    log_likelihood: Optional[float] = None
    status: FitStatus = FitStatus.OK
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status is FitStatus.OK

    def to_dict(self) -> Dict[str, Any]:
        return {
            'params': dict(self.params),
            'log_likelihood': self.log_likelihood,
            'status': self.status.value,
            'message': self.message,
        }


@dataclass
class TailFitResult:
    xmin: float
    n_tail: int
    discrete: bool
    fits: Dict[TailModel, ModelFit]
    ratios: Dict[TailModel, Optional[float]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'xmin': self.xmin,
            'n_tail': self.n_tail,
            'discrete': self.discrete,
            'models': {m.value: fit.to_dict() for m, fit in self.fits.items()},
            'ratios': {m.value: r for m, r in self.ratios.items()},
        }


@dataclass
class EvidenceVerdict:
    any_heavy_tail_positive: bool
    best_model: Optional[TailModel]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'any_heavy_tail_positive': self.any_heavy_tail_positive,
            'best_model': self.best_model.value if self.best_model else None,
        }
