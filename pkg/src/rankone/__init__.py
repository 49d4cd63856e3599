"""Rank-one subshifts: words, n-blocks, finite factors and mixing verdicts."""

__version__ = "0.1.0"

from .blocks import block_lengths, difference_set, up_down_gcd, witness_difference
from .factors import factor_map_eval, has_finite_factor, mef, p_max
from .mixing import decide_mixing, decide_weak_mixing, empirical_mixing_report
from .params import ParamSpec, family_spec, load_spec, odd_pair, periodic_spec, validate
from .parser import expected_occurrences, is_n_block
from .verdict import Status, Verdict
from .words import build_word, gap_sequence, word_length

__all__ = [
    "ParamSpec",
    "Status",
    "Verdict",
    "block_lengths",
    "build_word",
    "decide_mixing",
    "decide_weak_mixing",
    "difference_set",
    "empirical_mixing_report",
    "expected_occurrences",
    "factor_map_eval",
    "family_spec",
    "gap_sequence",
    "has_finite_factor",
    "is_n_block",
    "load_spec",
    "mef",
    "odd_pair",
    "p_max",
    "periodic_spec",
    "up_down_gcd",
    "validate",
    "witness_difference",
    "word_length",
]
