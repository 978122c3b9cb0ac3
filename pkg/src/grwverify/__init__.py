"""Curvature, soliton and perfect-fluid verification for GRW spacetimes."""

__version__ = "0.1.0"

from .curvature import CONVENTIONS, curvature_pack, geometry, third_order_pack  # noqa: E402
from .errors import GRWError  # noqa: E402
from .expr import evaluate, jet_eval, parse_expr  # noqa: E402
from .jets import Jet, TensorJet  # noqa: E402
from .spacetime import FiberSpec, SpacetimeSpec, build_grw  # noqa: E402

__all__ = [
    "CONVENTIONS",
    "FiberSpec",
    "GRWError",
    "Jet",
    "SpacetimeSpec",
    "TensorJet",
    "build_grw",
    "curvature_pack",
    "evaluate",
    "geometry",
    "jet_eval",
    "parse_expr",
    "third_order_pack",
]
