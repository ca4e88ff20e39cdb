"""Hermitian eigendecomposition with continuous eigenvector tracking.

Eigenpairs at consecutive sample times are matched by maximal eigenvector
overlap and phase-aligned so that <n(t)|n(t+dt)> is real and positive.  This
gives well-defined adiabatic branches through (anti-)crossings, which is what
the adiabaticity diagnostics and dynamical-phase integrals need.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class TrackedSpectrum:
    """Eigenvalue/eigenvector curves along a parameter sweep.

    ``energies[k, n]`` is the n-th tracked branch at sample k;
    ``vectors[k][:, n]`` the matching (phase-aligned) eigenvector.
    ``anticrossings`` lists ``(k, n, gap)`` samples where a tracked gap dipped
    below the configured threshold.
    """

    energies: np.ndarray
    vectors: np.ndarray
    anticrossings: tuple
    min_gap: float


def _fix_phase(vecs: np.ndarray) -> np.ndarray:
    # Largest-magnitude component made real positive, column by column.
    out = vecs.copy()
    for n in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, n])))
        ph = out[idx, n]
        if ph != 0:
            out[:, n] *= np.conj(ph) / abs(ph)
    return out


def eig_tracked(h_sequence, gap_threshold: float = 1e-6, herm_tol: float = 1e-10) -> TrackedSpectrum:
    """Track the spectrum of a sequence of Hermitian matrices.

    Parameters
    ----------
    h_sequence:
        Iterable of Hermitian matrices sampled along time (or any parameter).
    gap_threshold:
        Tracked gaps below this value are flagged as anti-crossings.

    Returns
    -------
    TrackedSpectrum
        Branches ordered by energy at the first sample, then continued by
        overlap matching.
    """
    hs = [np.asarray(h, dtype=complex) for h in h_sequence]
    if not hs:
        raise ValueError("empty matrix sequence")
    for k, h in enumerate(hs):
        dev = np.max(np.abs(h - h.conj().T))
        if dev > herm_tol:
            raise ValueError(f"matrix {k} not Hermitian (deviation {dev:.3e})")

    evals0, vecs0 = np.linalg.eigh(hs[0])
    if np.min(np.diff(evals0)) < DEGENERACY_TOL:
        warnings.warn("degenerate spectrum at first sample; tracking by overlap", stacklevel=2)
    vecs0 = _fix_phase(vecs0)
    dim = evals0.size

    energies = np.empty((len(hs), dim))
    vectors = np.empty((len(hs), dim, dim), dtype=complex)
    energies[0] = evals0
    vectors[0] = vecs0
    anticrossings = []
    min_gap = float(np.min(np.diff(np.sort(evals0)))) if dim > 1 else np.inf

    prev = vecs0
    for k in range(1, len(hs)):
        evals, vecs = np.linalg.eigh(hs[k])
        if dim > 1 and np.min(np.diff(evals)) < DEGENERACY_TOL:
            warnings.warn(f"degenerate spectrum at sample {k}; tracking by overlap", stacklevel=2)
        # assign new eigenvectors to previous branches by largest |overlap|
        ovl = np.abs(prev.conj().T @ vecs)  # [branch, new]
        rows, cols = linear_sum_assignment(-ovl)
        perm = np.empty(dim, dtype=int)
        perm[rows] = cols
        evals = evals[perm]
        vecs = vecs[:, perm]
        # align phases so <n(t)|n(t+dt)> is real positive
        phases = np.sum(prev.conj() * vecs, axis=0)
        phases = np.where(np.abs(phases) == 0, 1.0, phases / np.abs(phases))
        vecs = vecs * np.conj(phases)[None, :]
        energies[k] = evals
        vectors[k] = vecs
        if dim > 1:
            gaps = np.abs(np.diff(np.sort(evals)))
            g = float(np.min(gaps))
            min_gap = min(min_gap, g)
            for n in range(dim - 1):
                branch_gap = abs(evals[n + 1] - evals[n])
                if branch_gap < gap_threshold:
                    anticrossings.append((k, n, float(branch_gap)))
        prev = vecs
    return TrackedSpectrum(energies, vectors, tuple(anticrossings), min_gap)
