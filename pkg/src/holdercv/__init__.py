"""Hoelder-mean functionals in the calculus of variations."""
from .bvp import SolverConfig, SolveReport, solve_bvp, solve_ivp_reduced
from .centrality import centrality_alpha_sweep, evaluate_centrality, extremal_limits
from .core import Curve, Feature, VariationalProblem
from .variational import (
    Classification,
    ConservedKind,
    Variation,
    Verdict,
    classify,
    conserved_quantity,
    el_residual,
    el_residual_alpha0,
    second_variation,
)

__all__ = [
    "Classification",
    "ConservedKind",
    "Curve",
    "Feature",
    "SolveReport",
    "SolverConfig",
    "Variation",
    "VariationalProblem",
    "Verdict",
    "centrality_alpha_sweep",
    "classify",
    "conserved_quantity",
    "el_residual",
    "el_residual_alpha0",
    "evaluate_centrality",
    "extremal_limits",
    "second_variation",
    "solve_bvp",
    "solve_ivp_reduced",
]
