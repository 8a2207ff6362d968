"""Erasure channel, recovery conditions, recovery algorithms and the oracle."""
from .channel import (
    AMBIGUOUS,
    FAILED,
    RECOVERED,
    ObservedSpectrum,
    RecoveryOutcome,
    erase,
    missing_part,
    progression_erasure,
    random_erasure,
    transmit,
)
from .conditions import (
    ConditionReport,
    check_classical,
    check_comb_recovery,
    check_dra,
    condition_for,
)
from .difference import difference_decomposition, difference_pieces
from .dra import dra_recover, margin_chain, observed_part
from .oracle import CombFamily, OracleResult, brute_force_unique, family_for, oracle_search
from .support_search import ls_support_search

__all__ = [
    "AMBIGUOUS", "FAILED", "RECOVERED", "ObservedSpectrum", "RecoveryOutcome",
    "erase", "missing_part", "progression_erasure", "random_erasure", "transmit",
    "ConditionReport", "check_classical", "check_comb_recovery", "check_dra",
    "condition_for", "difference_decomposition", "difference_pieces",
    "dra_recover", "margin_chain", "observed_part", "CombFamily",
    "brute_force_unique", "family_for", "ls_support_search", "OracleResult",
    "oracle_search",
]
