"""Toeplitz/Hankel determinants with Fisher-Hartwig singularities, their
asymptotic predictions, and the Fredholm determinants they converge to."""

__version__ = "0.1.0"

from .detcore import (
    LogDet,
    MomentTable,
    OPUCResult,
    gessel_det,
    hankel_det,
    opuc,
    th_bridge_check,
    th_hankel_relation_residual,
    toeplitz_det,
    toeplitz_plus_hankel_det,
)
from .symbol import (
    CoeffTable,
    FHRepresentation,
    FHSingularity,
    FHSymbol,
    load_symbol,
    symbol_from_dict,
    symbol_to_dict,
)

__all__ = [
    "LogDet",
    "MomentTable",
    "OPUCResult",
    "CoeffTable",
    "FHRepresentation",
    "FHSingularity",
    "FHSymbol",
    "gessel_det",
    "hankel_det",
    "load_symbol",
    "opuc",
    "symbol_from_dict",
    "symbol_to_dict",
    "th_bridge_check",
    "th_hankel_relation_residual",
    "toeplitz_det",
    "toeplitz_plus_hankel_det",
]
