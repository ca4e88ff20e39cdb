"""Finite-dimensional quantum state containers with validation.

All quantities are in natural units (hbar = k_B = 1).  State objects are
immutable after construction; every operation in the package returns new
instances instead of mutating.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Construction-time tolerances.  Positivity is asserted, never repaired:
# silently projecting onto the positive cone would mask integrator bugs.
NORM_TOL = 1e-9
HERM_TOL = 1e-10
TRACE_TOL = 1e-9
EIG_FLOOR = -1e-8
PURITY_CEIL = 1 + 1e-9


class StateValidationError(ValueError):
    """Raised when a state fails its construction invariants."""


@dataclass(frozen=True)
class StateVector:
    """Normalized complex state vector.

    Parameters
    ----------
    amplitudes:
        Complex coefficients in some orthonormal basis.  The l2-norm must be
        1 within ``NORM_TOL`` unless ``normalize=True`` is passed to
        :meth:`build`.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or amp.size == 0:
            raise StateValidationError("amplitudes must be a nonempty 1-d array")
        if not np.all(np.isfinite(amp.view(float))):
            raise StateValidationError("non-finite amplitudes")
        nrm = np.linalg.norm(amp)
        if abs(nrm - 1.0) > NORM_TOL:
            raise StateValidationError(f"norm deviates from 1 by {abs(nrm - 1.0):.3e}")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def build(cls, amplitudes, normalize: bool = False) -> "StateVector":
        amp = np.asarray(amplitudes, dtype=complex)
        if normalize:
            nrm = np.linalg.norm(amp)
            if nrm == 0:
                raise StateValidationError("cannot normalize the zero vector")
            amp = amp / nrm
        return cls(amp)

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        amp = np.zeros(dim, dtype=complex)
        amp[index] = 1.0
        return cls(amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive density operator."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise StateValidationError("density matrix must be square")
        if not np.all(np.isfinite(mat.view(float))):
            raise StateValidationError("non-finite matrix entries")
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > HERM_TOL:
            raise StateValidationError(f"Hermiticity violated by {herm:.3e}")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateValidationError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
        evals = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
        if evals.min() < EIG_FLOOR:
            raise StateValidationError(f"negative eigenvalue {evals.min():.3e}")
        pur = float(np.vdot(mat, mat).real)
        if pur > PURITY_CEIL:
            raise StateValidationError(f"purity {pur:.12f} exceeds 1")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_statevector(cls, psi: StateVector) -> "DensityOperator":
        return psi.density()

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)

    def populations(self) -> np.ndarray:
        return np.diag(self.matrix).real.copy()

    def expectation(self, op: np.ndarray) -> complex:
        return complex(np.trace(op @ self.matrix))


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered sequence of state snapshots plus integrator diagnostics.

    ``states`` holds either raw complex arrays (fast path used by the
    integrators) or constructed state objects.  ``stats`` records integrator
    bookkeeping such as the cumulative renormalization drift.
    """

    times: np.ndarray
    states: tuple
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size != len(self.states):
            raise StateValidationError("times/states length mismatch")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise StateValidationError("times must be strictly increasing")
        t.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", tuple(self.states))

    def __len__(self) -> int:
        return len(self.states)

    @property
    def final(self):
        return self.states[-1]


def purity(rho: np.ndarray | DensityOperator) -> float:
    mat = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    return float(np.vdot(mat, mat).real)


def partial_trace(rho, dims: tuple[int, int], keep: int):
    """Trace out one factor of a bipartite density operator.

    Parameters
    ----------
    rho:
        Density operator (or raw matrix) on a Hilbert space of dimension
        ``dims[0] * dims[1]``.
    dims:
        Dimensions ``(dA, dB)`` of the two factors.
    keep:
        0 to return the reduced state on A, 1 for B.

    Returns
    -------
    numpy.ndarray
        Reduced density matrix; trace is preserved exactly up to rounding.
    """
    mat = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    da, db = dims
    if mat.shape != (da * db, da * db):
        raise ValueError(f"dimension {mat.shape} does not factorize as {da}x{db}")
    if keep not in (0, 1):
        raise ValueError("keep must be 0 or 1")
    tensor = mat.reshape(da, db, da, db)
    if keep == 0:
        out = np.einsum("ajbj->ab", tensor)
    else:
        out = np.einsum("jajb->ab", tensor)
    return out
