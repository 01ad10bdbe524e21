from .convert import decomposition_to_frame, embed
from .loess import loess_smooth
from .ssa import SsaModel, hankelize, ssa_decompose, ssa_forecast, ssa_reconstruct, trajectory_matrix
from .stl import StlParams, StlResult, robustness_weights, stl_decompose

__all__ = [
    "SsaModel",
    "StlParams",
    "StlResult",
    "decomposition_to_frame",
    "embed",
    "hankelize",
    "loess_smooth",
    "robustness_weights",
    "ssa_decompose",
    "ssa_forecast",
    "ssa_reconstruct",
    "stl_decompose",
    "trajectory_matrix",
]
