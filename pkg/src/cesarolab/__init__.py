"""Closed-form Fourier operators on the circle and checks of Cesaro averages of partial sums."""
from .circle import TWO_PI, GridSet, PCFunction, TrigPoly, bandlimit, eval_trig, fourier_coefficient, lp_norm
from .dyadic import CZDecomposition, DyadicInterval, IntervalFamily, cz_decompose, dilate, filter_beta
from .kernels import dirichlet_kernel, fejer_kernel
from .operators import (
    CompositeSpec,
    e_operator,
    fejer_mean,
    hilbert_modified,
    modified_partial_sum,
    partial_sum,
    sv_difference,
    t_beta_operator,
    t_operator,
    vp_mean,
)
from .sequences import IndexSequence, block_coords, make_delta_growth, make_lacunary

__version__ = "0.1.0"

__all__ = [
    "TWO_PI",
    "CZDecomposition",
    "CompositeSpec",
    "DyadicInterval",
    "GridSet",
    "IndexSequence",
    "IntervalFamily",
    "PCFunction",
    "TrigPoly",
    "bandlimit",
    "block_coords",
    "cz_decompose",
    "dilate",
    "dirichlet_kernel",
    "e_operator",
    "eval_trig",
    "fejer_kernel",
    "fejer_mean",
    "filter_beta",
    "fourier_coefficient",
    "hilbert_modified",
    "lp_norm",
    "make_delta_growth",
    "make_lacunary",
    "modified_partial_sum",
    "partial_sum",
    "sv_difference",
    "t_beta_operator",
    "t_operator",
    "vp_mean",
]
