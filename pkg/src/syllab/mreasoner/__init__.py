"""Mental-model reasoner simulation (mReasoner-style)."""
from .backend import BACKEND, KERNELS
from .individuals import IndividualSets, default_sets
from .model import (
    DEFAULT_K,
    MentalModel,
    ReasonerParams,
    build_model,
    holds_in,
    mutate,
    premises_hold_in,
    respond,
    response_distribution,
    scan_conclusion,
    search_counterexample,
    simulate,
)

__all__ = [
    "BACKEND", "KERNELS", "DEFAULT_K", "IndividualSets", "default_sets", "MentalModel",
    "ReasonerParams", "build_model", "holds_in", "mutate", "premises_hold_in", "respond",
    "response_distribution", "scan_conclusion", "search_counterexample", "simulate",
]
