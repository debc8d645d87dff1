"""Incremental non-dominated sorting with concurrent update strategies."""

from ._ndsort import (
    Archive,
    Dataset,
    RankedPopulation,
    brute_force_ranks,
    compare_dominance,
    evaluate,
    helper_b_merge,
    lex_compare,
    load_dataset,
    merge_two_antichains,
    nadir,
    problem_variables,
    save_dataset,
    sort_ranks,
    synthesize_dataset,
)

__all__ = [
    "Archive",
    "Dataset",
    "RankedPopulation",
    "brute_force_ranks",
    "compare_dominance",
    "evaluate",
    "helper_b_merge",
    "lex_compare",
    "load_dataset",
    "merge_two_antichains",
    "nadir",
    "problem_variables",
    "save_dataset",
    "sort_ranks",
    "synthesize_dataset",
]

__version__ = "0.1.0"
