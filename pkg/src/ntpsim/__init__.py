"""Negotiated transfer pricing with fuzzy Q-learning divisions.

Closed-form hold-up benchmarks, a three-agent learning simulation and the
statistics used to compare sharing rules.
"""
from .analytic import (first_best, hq_profit_at_optimal_gammas, optimal_gammas,
                       second_best, expected_hq_profit_at)
from .exploration import PolicyConfig, PolicyKind
from .kernel import BACKEND
from .model import FirmParams, ParameterError, SharingRule
from .runner import GridResults, ScenarioSpec, run_grid, run_replication, summarize

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "FirmParams", "GridResults", "ParameterError", "PolicyConfig", "PolicyKind",
    "ScenarioSpec", "SharingRule", "expected_hq_profit_at", "first_best",
    "hq_profit_at_optimal_gammas", "optimal_gammas", "run_grid", "run_replication",
    "second_best", "summarize", "__version__",
]
