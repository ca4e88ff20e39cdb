"""Fixed-step RK4 integrators for Schrodinger, von Neumann and Lindblad flows.

Fixed stepping (rather than adaptive) keeps trajectories bit-reproducible for
regression tests; convergence is assessed with an explicit step-halving
report.  Norm and trace are renormalized each step and the applied correction
is accumulated, so the drift diagnostics expose integration error without
letting it contaminate long runs.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .states import DensityOperator, StateVector, Trajectory

HERM_SAMPLE_TOL = 1e-10
TRACE_ABORT = 1e-5


class IntegrationError(RuntimeError):
    pass


def _check_hermitian(h: np.ndarray, t: float, tol: float = HERM_SAMPLE_TOL) -> None:
    dev = np.max(np.abs(h - h.conj().T))
    if dev > tol:
        raise IntegrationError(f"H(t={t:g}) not Hermitian (deviation {dev:.3e})")


def _as_h_func(hamiltonian) -> Callable[[float], np.ndarray]:
    if callable(hamiltonian):
        return hamiltonian
    h = np.asarray(hamiltonian, dtype=complex)
    return lambda t: h


def _time_grid(tspan: Sequence[float], dt: float) -> np.ndarray:
    t0, t1 = float(tspan[0]), float(tspan[-1])
    if dt <= 0:
        raise ValueError("dt must be positive")
    n = max(1, int(round((t1 - t0) / dt)))
    return np.linspace(t0, t1, n + 1)


def _rk4_step(f, t, y, dt):
    k1 = f(t, y)
    k2 = f(t + dt / 2, y + dt / 2 * k1)
    k3 = f(t + dt / 2, y + dt / 2 * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def evolve_schrodinger(
    hamiltonian,
    psi0: StateVector | np.ndarray,
    tspan: Sequence[float],
    dt: float,
    store_every: int = 1,
    check_hermitian: bool = True,
) -> Trajectory:
    """Integrate d|psi>/dt = -i H(t) |psi| with fixed-step RK4.

    Parameters
    ----------
    hamiltonian:
        Hermitian matrix or callable ``t -> matrix``.
    psi0:
        Initial state.
    tspan:
        ``(t0, t1)``; interior points are ignored.
    dt:
        Step size; the grid snaps to an integer number of steps.
    store_every:
        Keep every n-th step in the returned trajectory (the final state is
        always kept).

    Returns
    -------
    Trajectory
        Stored states are unit-norm arrays; ``stats['norm_drift']`` is the
        accumulated per-step renormalization, ``stats['max_step_drift']`` the
        worst single step.
    """
    hfun = _as_h_func(hamiltonian)
    psi = np.array(psi0.amplitudes if isinstance(psi0, StateVector) else psi0, dtype=complex)
    grid = _time_grid(tspan, dt)
    if check_hermitian:
        for ts in (grid[0], grid[len(grid) // 2], grid[-1]):
            _check_hermitian(np.asarray(hfun(ts), dtype=complex), ts)

    def rhs(t, y):
        return -1j * (np.asarray(hfun(t), dtype=complex) @ y)

    times = [grid[0]]
    states = [psi.copy()]
    drift = 0.0
    max_drift = 0.0
    for i in range(len(grid) - 1):
        h = grid[i + 1] - grid[i]
        psi = _rk4_step(rhs, grid[i], psi, h)
        nrm = np.linalg.norm(psi)
        if not np.isfinite(nrm) or nrm == 0:
            raise IntegrationError(f"non-finite amplitudes at t={grid[i + 1]:g}")
        step_drift = abs(nrm - 1.0)
        drift += step_drift
        max_drift = max(max_drift, step_drift)
        psi /= nrm
        if (i + 1) % store_every == 0 or i == len(grid) - 2:
            times.append(grid[i + 1])
            states.append(psi.copy())
    stats = {"norm_drift": drift, "max_step_drift": max_drift, "dt": dt, "steps": len(grid) - 1}
    return Trajectory(np.array(times), tuple(states), stats)


def evolve_lindblad(
    hamiltonian,
    lindblads: Sequence[np.ndarray],
    rho0: DensityOperator | np.ndarray,
    tspan: Sequence[float],
    dt: float,
    store_every: int = 1,
) -> Trajectory:
    """Integrate the Lindblad master equation with fixed-step RK4.

    drho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2).

    Trace and Hermiticity are restored each step and the applied corrections
    accumulated in the trajectory stats; a trace drift beyond ``1e-5`` in a
    single step aborts with diagnostics.
    """
    hfun = _as_h_func(hamiltonian)
    rho = np.array(rho0.matrix if isinstance(rho0, DensityOperator) else rho0, dtype=complex)
    dim = rho.shape[0]
    ls = [np.asarray(l, dtype=complex) for l in lindblads]
    for l in ls:
        if l.shape != (dim, dim):
            raise ValueError(f"Lindblad operator shape {l.shape} does not match dim {dim}")
    lduo = [(l, l.conj().T @ l) for l in ls]
    grid = _time_grid(tspan, dt)

    def rhs(t, r):
        h = np.asarray(hfun(t), dtype=complex)
        out = -1j * (h @ r - r @ h)
        for l, ll in lduo:
            out += l @ r @ l.conj().T - 0.5 * (ll @ r + r @ ll)
        return out

    times = [grid[0]]
    states = [rho.copy()]
    trace_drift = 0.0
    herm_drift = 0.0
    for i in range(len(grid) - 1):
        h = grid[i + 1] - grid[i]
        rho = _rk4_step(rhs, grid[i], rho, h)
        tr = np.trace(rho).real
        step = abs(tr - 1.0)
        if step > TRACE_ABORT:
            raise IntegrationError(
                f"trace drift {step:.3e} exceeds {TRACE_ABORT:g} at t={grid[i + 1]:g}; "
                f"reduce dt (currently {dt:g})"
            )
        trace_drift += step
        herm = np.max(np.abs(rho - rho.conj().T))
        herm_drift = max(herm_drift, herm)
        rho = (rho + rho.conj().T) / 2
        rho /= np.trace(rho).real
        if (i + 1) % store_every == 0 or i == len(grid) - 2:
            times.append(grid[i + 1])
            states.append(rho.copy())
    stats = {
        "trace_drift": trace_drift,
        "max_hermiticity_drift": herm_drift,
        "dt": dt,
        "steps": len(grid) - 1,
    }
    return Trajectory(np.array(times), tuple(states), stats)


def convergence_report(run: Callable[[float], np.ndarray], dt: float) -> dict:
    """Step-halving convergence estimate for a fixed-step integration.

    ``run`` maps a step size to a final state array.  Returns the deviation
    between dt and dt/2 results together with the inferred order.
    """
    a = run(dt)
    b = run(dt / 2)
    c = run(dt / 4)
    e1 = float(np.max(np.abs(a - b)))
    e2 = float(np.max(np.abs(b - c)))
    order = np.log2(e1 / e2) if e2 > 0 else np.inf
    return {"dt": dt, "err_halved": e1, "err_quartered": e2, "observed_order": float(order)}
