from src.interactor.fitting.hyperlap_plus import (
    FitResult,
    FitState,
    PairCountIndex,
    hhd,
    hyper_lap_plus,
    update_step,
)

__all__ = ["FitResult", "FitState", "PairCountIndex", "hhd", "hyper_lap_plus", "update_step"]
