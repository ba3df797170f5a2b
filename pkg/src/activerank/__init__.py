"""Exact active ranking from noisy pairwise and listwise comparisons."""
from .diagnostics import GapProfile, gap_profile, lower_bound_eq1, lower_bound_eq2
from .errors import (ActiveRankError, EmptyList, InvalidInstance, InvalidParam, InvalidSet,
                     ListwiseUnsupported, ScheduleExhausted)
from .instance import ComparisonOracle, Instance, NoiselessOracle, OracleStats, compare, generate_instance
from .kernels import BACKEND
from .listwise import MergeCounter, listwise_merge, listwise_merge_sort
from .pit import Pit, build_pit, locate_interval
from .ranking import AtcParams, RankingOutcome, atc, ati, iai, iir

__version__ = "0.1.0"

__all__ = [
    "ActiveRankError", "AtcParams", "BACKEND", "ComparisonOracle", "EmptyList", "GapProfile",
    "Instance", "InvalidInstance", "InvalidParam", "InvalidSet", "ListwiseUnsupported",
    "MergeCounter", "NoiselessOracle", "OracleStats", "Pit", "RankingOutcome", "ScheduleExhausted",
    "atc", "ati", "build_pit", "compare", "gap_profile", "generate_instance", "iai", "iir",
    "listwise_merge", "listwise_merge_sort", "locate_interval", "lower_bound_eq1", "lower_bound_eq2",
]
