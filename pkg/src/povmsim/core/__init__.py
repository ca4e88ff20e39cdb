"""Dense numeric core: states, integrators, eigen-tracking, phase space."""

from .integrate import IntegrationError, convergence_report, evolve_lindblad, evolve_schrodinger
from .phasespace import (
    GridError,
    PhaseSpaceGrid,
    husimi_from_wigner,
    wigner,
    wigner_of_matrix,
    wigner_overlap,
)
from .serialize import save_grid, save_trajectory, write_csv, write_sidecar
from .spectra import TrackedSpectrum, eig_tracked
from .states import (
    DensityOperator,
    StateValidationError,
    StateVector,
    Trajectory,
    partial_trace,
    purity,
)

__all__ = [
    "DensityOperator",
    "GridError",
    "IntegrationError",
    "PhaseSpaceGrid",
    "StateValidationError",
    "StateVector",
    "TrackedSpectrum",
    "Trajectory",
    "convergence_report",
    "eig_tracked",
    "evolve_lindblad",
    "evolve_schrodinger",
    "husimi_from_wigner",
    "partial_trace",
    "purity",
    "save_grid",
    "save_trajectory",
    "wigner",
    "wigner_of_matrix",
    "wigner_overlap",
    "write_csv",
    "write_sidecar",
]
