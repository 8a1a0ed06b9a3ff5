"""Exact locally conformal parallel G2 Laplacian flows on solvable Lie algebras."""

from .curvature import levi_civita, ricci, riemann
from .exterior import Form, canonical_phi, canonical_psi, hodge_star, wedge
from .flow import (
    coflow_residual,
    coflow_to_flow,
    flow_residual,
    flow_to_coflow,
    soliton_check,
    solve_flow_parameters,
)
from .g2ops import G2Structure, classify_torsion, laplacian, lcp_conditions
from .liealg import FrameScaling, ScaledAlgebra, get_algebra, load_catalog
from .scalar import RingContext, Scalar

__version__ = "0.1.0"

__all__ = [
    "Form", "FrameScaling", "G2Structure", "RingContext", "Scalar", "ScaledAlgebra",
    "canonical_phi", "canonical_psi", "classify_torsion", "coflow_residual", "coflow_to_flow",
    "flow_residual", "flow_to_coflow", "get_algebra", "hodge_star", "laplacian", "lcp_conditions",
    "levi_civita", "load_catalog", "ricci", "riemann", "soliton_check", "solve_flow_parameters",
    "wedge",
]
