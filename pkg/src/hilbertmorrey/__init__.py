"""Discrete Hilbert transform on weighted Morrey sequence spaces: transforms,
norms, weight constants, a continuous embedding and an inequality harness."""

__version__ = "0.1.0"

from .seq import Seq, Weight, make_sequence, make_weight, window_sum  # noqa: E402
from .transforms import (EvalPlan, hilbert_fast, hilbert_naive,  # noqa: E402
                         truncated_maximal, distribution_function)
from .norms import (MorreyParams, ap_constant, discrete_morrey_norm,  # noqa: E402
                    doubling_constant, reverse_doubling_constant, weighted_morrey_norm)

__all__ = [
    "Seq", "Weight", "make_sequence", "make_weight", "window_sum",
    "EvalPlan", "hilbert_naive", "hilbert_fast", "truncated_maximal",
    "distribution_function", "MorreyParams", "ap_constant", "discrete_morrey_norm",
    "doubling_constant", "reverse_doubling_constant", "weighted_morrey_norm",
]
