"""Ordered Bratteli-Vershik diagrams: exact dynamics, invariant measures and eigenvalue tests."""

from ._core import (
    BratteliError,
    Diagram,
    __version__,
    dimension_group_witness,
    enumerate_prefixes,
    golden_construction,
    measure_candidates,
    minus_one_check,
    necessary_series,
    precision,
    return_time,
    set_precision,
    stable_decompose,
    toeplitz_classify,
    toeplitz_cyclic,
    toeplitz_rank3_example,
    vershik_step,
)

__all__ = [
    "BratteliError",
    "Diagram",
    "__version__",
    "dimension_group_witness",
    "enumerate_prefixes",
    "golden_construction",
    "measure_candidates",
    "minus_one_check",
    "necessary_series",
    "precision",
    "return_time",
    "set_precision",
    "stable_decompose",
    "toeplitz_classify",
    "toeplitz_cyclic",
    "toeplitz_rank3_example",
    "vershik_step",
]
