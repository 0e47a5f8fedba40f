"""Exact reductions from polynomial-system feasibility to sparse shifts,
affine projections, biquadratic negativity, hyperbolicity, real stability
and convexity, with brute-force and Sturm-based verifiers."""

from .field import QQ, Field
from .poly import (
    LayoutError,
    Polynomial,
    PolySystem,
    VariableLayout,
    add,
    affine_substitute,
    complex_split,
    evaluate,
    homogenize_bipartite,
    is_biquadratic,
    monomial_count,
    mul,
    partial_derivative,
    shift_substitute,
)

__version__ = "0.1.0"

__all__ = [
    "QQ", "Field", "LayoutError", "Polynomial", "PolySystem", "VariableLayout",
    "add", "affine_substitute", "complex_split", "evaluate", "homogenize_bipartite",
    "is_biquadratic", "monomial_count", "mul", "partial_derivative", "shift_substitute",
]
