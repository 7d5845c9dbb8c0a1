from src.interactor.statistics.tailstats import (
    evidence_summary,
    fit_power_law,
    fit_tails,
    ks_distance,
    select_xmin,
)

__all__ = ["evidence_summary", "fit_power_law", "fit_tails", "ks_distance", "select_xmin"]
