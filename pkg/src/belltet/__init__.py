"""Coherence and discord of Bell-diagonal two-qubit states, and their level sets."""

from .measures import MeasureSet, measure_all
from .qstate import BellDiagonalState, OutsideTetrahedron, density_matrix, new_state, spectrum

__all__ = [
    "BellDiagonalState",
    "MeasureSet",
    "OutsideTetrahedron",
    "density_matrix",
    "measure_all",
    "new_state",
    "spectrum",
]
