"""Spectral layouts that expose structural balance in signed networks."""

from .balance import (
    BalanceReport,
    balance_report,
    cycle_oracle,
    frustration_against,
    switching_balance_test,
    triangle_census,
)
from .layout import MEASURES, LayoutModel, Measure, compute_layout
from .render import RenderSpec, render_svg
from .sgraph import (
    SignedGraph,
    is_connected,
    parse_edge_list,
    serialize_edge_list,
    signed_adjacency,
    signed_laplacian,
)
from .spectral import SpectralResult, smallest_eigenpair, verify_residual
from .synth import GenParams, generate, reshuffle_signs

__all__ = [
    "BalanceReport",
    "GenParams",
    "LayoutModel",
    "MEASURES",
    "Measure",
    "RenderSpec",
    "SignedGraph",
    "SpectralResult",
    "balance_report",
    "compute_layout",
    "cycle_oracle",
    "frustration_against",
    "generate",
    "is_connected",
    "parse_edge_list",
    "render_svg",
    "reshuffle_signs",
    "serialize_edge_list",
    "signed_adjacency",
    "signed_laplacian",
    "smallest_eigenpair",
    "switching_balance_test",
    "triangle_census",
    "verify_residual",
]
