"""Chromatic correlation clustering toolkit.

Exact solving by exhaustive search, an exact-rational cluster LP with
randomized rounding, a constant-blowup preclustering reduction, and a
pivot baseline, wired together behind one CLI (see chromclust.cli).
"""

from .errors import (
    CapacityError,
    ChromclustError,
    ContractError,
    DiagnosticError,
    StructuralError,
)
from .model import ChromaticInstance, Clustering, PreclusteredInstance

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ChromaticInstance",
    "ChromclustError",
    "Clustering",
    "ContractError",
    "DiagnosticError",
    "PreclusteredInstance",
    "StructuralError",
    "__version__",
]
