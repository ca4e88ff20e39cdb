"""CSV output with JSON metadata sidecars.

Every CSV has a header row and one record per time/grid point.  The sidecar
(`<name>.meta.json`) captures the run parameters, tolerances, and integrator
statistics so a result file is self-describing.  Floats are written with
`repr` so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import platform
from pathlib import Path

import numpy as np

from .phasespace import PhaseSpaceGrid
from .states import Trajectory


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _jsonify(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def write_sidecar(csv_path, metadata: dict) -> Path:
    csv_path = Path(csv_path)
    meta = dict(metadata)
    meta.setdefault("python", platform.python_version())
    meta.setdefault("numpy", np.__version__)
    side = csv_path.with_suffix(csv_path.suffix + ".meta.json")
    side.write_text(json.dumps(_jsonify(meta), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return side


def save_trajectory(traj: Trajectory, path, metadata: dict | None = None, labels: list[str] | None = None) -> Path:
    """Write a trajectory as CSV: one row per time, columns per component.

    Vector states are stored as per-site populations plus the complex
    amplitudes; matrix states as populations only (full matrices belong in
    npz archives, not CSV).
    """
    first = np.asarray(traj.states[0])
    rows = []
    if first.ndim == 1:
        dim = first.size
        labels = labels or [f"site{i + 1}" for i in range(dim)]
        header = ["time"] + [f"pop_{s}" for s in labels] + [f"re_{s}" for s in labels] + [f"im_{s}" for s in labels]
        for t, st in zip(traj.times, traj.states):
            st = np.asarray(st)
            rows.append([t, *np.abs(st) ** 2, *st.real, *st.imag])
    else:
        dim = first.shape[0]
        labels = labels or [f"site{i + 1}" for i in range(dim)]
        header = ["time"] + [f"pop_{s}" for s in labels] + ["purity"]
        for t, st in zip(traj.times, traj.states):
            st = np.asarray(st)
            rows.append([t, *np.diag(st).real, float(np.vdot(st, st).real)])
    out = write_csv(path, header, rows)
    meta = dict(metadata or {})
    meta["integrator_stats"] = traj.stats
    write_sidecar(out, meta)
    return out


def save_grid(grid: PhaseSpaceGrid, path, metadata: dict | None = None, value_name: str = "value") -> Path:
    """Write a phase-space grid as CSV rows (x, p, value)."""
    rows = []
    for i, xv in enumerate(grid.x):
        for k, pv in enumerate(grid.p):
            rows.append([xv, pv, grid.values[i, k]])
    out = write_csv(path, ["x", "p", value_name], rows)
    meta = dict(metadata or {})
    meta["quadrature_error"] = grid.quadrature_error
    write_sidecar(out, meta)
    return out
