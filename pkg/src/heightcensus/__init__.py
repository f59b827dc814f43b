"""Integral points of bounded height on three homogeneous varieties.

Exact enumerators, growth-law predictions from boundary divisor data, chart
pole-order calculus, weights for unimodular triples, and a ladder/fit CLI.
"""
from .clemens import DivisorModel, GrowthPrediction, predict, predict_preset
from .heights import QuadricPairInstance, Splitting, TriangleTriple
from .lattice_core import covolume_sq, is_primitive, kernel_basis, wedge_sq_norm

__version__ = "0.1.0"

__all__ = [
    "DivisorModel", "GrowthPrediction", "predict", "predict_preset",
    "QuadricPairInstance", "Splitting", "TriangleTriple",
    "covolume_sq", "is_primitive", "kernel_basis", "wedge_sq_norm",
]
