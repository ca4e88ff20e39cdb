"""Wigner and Husimi transforms on position/phase-space grids.

Conventions (hbar = 1):

    W(x, p) = (1/pi) Integral dy exp(-2 i p y) rho(x + y, x - y)

with marginals Integral W dp = rho(x, x) and Integral W dx = rho(p, p), and
the overlap formula Tr(rho1 rho2) = 2 pi Integral W1 W2 dx dp.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

EDGE_TOL = 1e-8


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Real-valued function sampled on a rectangular (x, p) grid."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    quadrature_error: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        p = np.asarray(self.p, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (x.size, p.size):
            raise GridError(f"values shape {v.shape} does not match grid ({x.size}, {p.size})")
        for arr in (x, p, v):
            arr.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "values", v)

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def integral(self) -> float:
        return float(np.sum(self.values) * self.dx * self.dp)

    def marginal_x(self) -> np.ndarray:
        return np.sum(self.values, axis=1) * self.dp

    def marginal_p(self) -> np.ndarray:
        return np.sum(self.values, axis=0) * self.dx


def _antidiagonal_table(rho: np.ndarray) -> np.ndarray:
    """A[i, j] = rho[i + (j - N), i - (j - N)], zero outside the array."""
    n = rho.shape[0]
    m = 2 * n
    a = np.zeros((n, m), dtype=complex)
    i = np.arange(n)
    for j in range(m):
        off = j - n
        lo = max(0, -off)
        hi = min(n, n - off)
        if lo < hi:
            sel = i[lo:hi]
            a[sel, j] = rho[sel + off, sel - off]
    return a


def wigner_of_matrix(rho: np.ndarray, xgrid: np.ndarray, check_edges: bool = True) -> PhaseSpaceGrid:
    """Wigner transform of a position-basis density matrix.

    ``rho[i, j]`` approximates <x_i| rho |x_j> (continuum normalization, so
    diag(rho) * dx sums to 1).  The momentum grid is fixed by the position
    grid: p_k = pi (k - N) / (2 N dx), k = 0..2N-1.

    Raises
    ------
    GridError
        If the state has support at the grid edges (coverage too small) or at
        the extreme momenta (grid too coarse for the momentum content).
    """
    rho = np.asarray(rho, dtype=complex)
    xg = np.asarray(xgrid, dtype=float)
    n = xg.size
    if rho.shape != (n, n):
        raise GridError("density matrix does not match position grid")
    dx = xg[1] - xg[0]
    peak = np.max(np.abs(np.diag(rho)))
    if check_edges and max(abs(rho[0, 0]), abs(rho[-1, -1])) > EDGE_TOL * peak:
        raise GridError("state has support at the position-grid edges; enlarge the grid")

    m = 2 * n
    a = _antidiagonal_table(rho)
    a *= (-1) ** np.arange(m)[None, :]
    f = np.fft.fft(a, axis=1)
    k = np.arange(m)
    pgrid = np.pi * (k - n) / (m * dx)
    w = (dx / np.pi) * f * np.exp(1j * np.pi * (k - n))[None, :]
    wreal = w.real
    if np.max(np.abs(w.imag)) > 1e-9 * max(np.max(np.abs(wreal)), 1e-300):
        raise GridError("Wigner transform has a non-negligible imaginary part")
    # reorder p ascending
    order = np.argsort(pgrid)
    pgrid = pgrid[order]
    wreal = wreal[:, order]
    if check_edges:
        pmarg = np.abs(np.sum(wreal, axis=0) * dx)
        if pmarg.size and max(pmarg[0], pmarg[-1]) > EDGE_TOL * max(pmarg.max(), 1e-300):
            raise GridError("momentum support reaches the Nyquist edge; refine dx")
    dp = pgrid[1] - pgrid[0]
    qerr = abs(float(np.sum(wreal) * dx * dp) - float(np.sum(np.diag(rho)).real * dx))
    return PhaseSpaceGrid(xg, pgrid, wreal, quadrature_error=qerr)


def husimi_from_wigner(grid: PhaseSpaceGrid, width: float) -> PhaseSpaceGrid:
    """Husimi Q from a Wigner grid by Gaussian smoothing.

    Q(x, p) = (1/pi) Integral W(x', p') exp(-(x-x')^2/width^2
                                            - (p-p')^2 width^2) dx' dp'
    """
    dx, dp = grid.dx, grid.dp
    xk = np.arange(-grid.x.size + 1, grid.x.size) * dx
    pk = np.arange(-grid.p.size + 1, grid.p.size) * dp
    kernel = np.exp(-np.add.outer(xk**2 / width**2, pk**2 * width**2))
    q = fftconvolve(grid.values, kernel, mode="same") * dx * dp / np.pi
    if q.min() < -1e-10:
        raise GridError(f"Husimi negativity {q.min():.3e} beyond tolerance")
    qerr = abs(float(np.sum(q) * dx * dp) - grid.integral())
    return PhaseSpaceGrid(grid.x, grid.p, q, quadrature_error=qerr)


def wigner_overlap(g1: PhaseSpaceGrid, g2: PhaseSpaceGrid) -> float:
    """Tr(rho1 rho2) = 2 pi Integral W1 W2 by grid quadrature."""
    if g1.values.shape != g2.values.shape:
        raise GridError("grids must match")
    return float(2 * np.pi * np.sum(g1.values * g2.values) * g1.dx * g1.dp)


def wigner(state, xgrid: np.ndarray, check_edges: bool = True) -> PhaseSpaceGrid:
    """Wigner transform of a density matrix, state object, or cat state.

    Dispatches Gaussian cat states to their analytic three-term form; raw
    matrices and DensityOperator instances go through the FFT transform.
    """
    from ..gaussian import CatState  # late import avoids a cycle
    from .states import DensityOperator

    if isinstance(state, CatState):
        from ..wigner import wigner_cat

        xg = np.asarray(xgrid, dtype=float)
        n = xg.size
        dx = xg[1] - xg[0]
        pgrid = np.pi * (np.arange(2 * n) - n) / (2 * n * dx)
        return wigner_cat(state, xg, pgrid, normalized=True)
    if isinstance(state, DensityOperator):
        state = state.matrix
    return wigner_of_matrix(state, xgrid, check_edges=check_edges)
