"""Minimum-uncertainty Gaussian wave packets and their cat superpositions.

The packet |x, p>_W has position-space wavefunction

    <x'|x,p> = exp(-i x p / 2) / sqrt(sqrt(pi) W) * exp(i x' p) * exp(-(x-x')^2 / 2 W^2)

in natural units (hbar = 1), so that |x,p> = D(x,p)|0,0> with the Glauber
displacement operator D(x,p) = exp(i(p xhat - x phat)).  Position spread is
W/sqrt(2), momentum spread 1/(sqrt(2) W).

The closed-form overlap

    <x1,p1|x2,p2> = exp(i (x1 p2 - x2 p1) / 2) *
                    exp(-(x1-x2)^2/(4 W^2) - W^2 (p1-p2)^2/4)

is the phase oracle used throughout: all collision phases are cross-checked
against it rather than against transcribed phase expressions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

HBAR = 1.0


@dataclass(frozen=True)
class GaussianLabel:
    """Label (x, p, W, m) of a minimum-uncertainty packet |x,p>_W."""

    x: float
    p: float
    W: float
    m: float = 1.0

    def __post_init__(self):
        if self.W <= 0:
            raise ValueError("W must be positive")
        if self.m <= 0:
            raise ValueError("m must be positive")

    @property
    def v(self) -> float:
        return self.p / self.m

    def shifted(self, dx: float = 0.0, dp: float = 0.0) -> "GaussianLabel":
        return replace(self, x=self.x + dx, p=self.p + dp)

    def wavefunction(self, xgrid: np.ndarray, t: float = 0.0) -> np.ndarray:
        """Position wavefunction, freely evolved for a time t.

        Free evolution of a Gaussian label has the closed form obtained by
        substituting W^2 -> W^2 + i t / m in the quadratic and propagating
        the center classically.
        """
        xg = np.asarray(xgrid, dtype=float)
        if t == 0.0:
            norm = 1.0 / np.sqrt(np.sqrt(np.pi) * self.W)
            return (
                norm
                * np.exp(-1j * self.x * self.p / 2)
                * np.exp(1j * xg * self.p)
                * np.exp(-((self.x - xg) ** 2) / (2 * self.W**2))
            )
        # U(t) exp(i x'p - (x'-x)^2/(2W^2)) via momentum-space quadrature in
        # closed form: width parameter becomes complex.
        w2 = self.W**2 + 1j * t / self.m
        xc = self.x + self.p * t / self.m
        norm = 1.0 / np.sqrt(np.sqrt(np.pi) * self.W * (w2 / self.W**2))
        phase = np.exp(-1j * self.x * self.p / 2 - 1j * self.p**2 * t / (2 * self.m))
        return norm * phase * np.exp(1j * xg * self.p) * np.exp(-((xg - xc) ** 2) / (2 * w2))

    def fock_coefficients(self, nmax: int) -> np.ndarray:
        """Coefficients <n|x,p> in the oscillator basis matched to width W.

        The packet is the coherent state of the ladder operator
        a = xhat/(sqrt(2) W) + i W phat / sqrt(2) with eigenvalue
        alpha = x/(sqrt(2) W) + i W p / sqrt(2).
        """
        alpha = self.x / (np.sqrt(2) * self.W) + 1j * self.W * self.p / np.sqrt(2)
        n = np.arange(nmax)
        logfact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, nmax)))))
        with np.errstate(divide="ignore"):
            logmag = -abs(alpha) ** 2 / 2 + n * np.log(abs(alpha) + (alpha == 0)) - logfact / 2
        coeff = np.exp(logmag) * np.exp(1j * n * np.angle(alpha))
        if alpha == 0:
            coeff = np.zeros(nmax, dtype=complex)
            coeff[0] = 1.0
        return coeff


def overlap(a: GaussianLabel, b: GaussianLabel) -> complex:
    """Closed-form overlap <a|b> of two equal-width Gaussian labels."""
    if abs(a.W - b.W) > 1e-12 * max(a.W, b.W):
        raise ValueError("overlap formula requires equal widths")
    w = a.W
    phase = (a.x * b.p - b.x * a.p) / 2
    mag = -((a.x - b.x) ** 2) / (4 * w**2) - w**2 * (a.p - b.p) ** 2 / 4
    return complex(np.exp(1j * phase + mag))


@dataclass(frozen=True)
class CatState:
    """Two-branch superposition rho = |a><a| + |b><b| + c e^{i phi}|a><b| + h.c.

    The state is kept unnormalized (trace ~ 2 for well-separated branches);
    ``c`` in [0, 1] measures the surviving coherence, ``phi`` the relative
    phase.  A fresh superposition |a> + |b> corresponds to c = 1, phi = 0.
    """

    a: GaussianLabel
    b: GaussianLabel
    c: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.c <= 1.0 + 1e-12):
            raise ValueError("coherence magnitude c must lie in [0, 1]")
        if abs(self.a.W - self.b.W) > 1e-12 * self.a.W or abs(self.a.m - self.b.m) > 1e-12 * self.a.m:
            raise ValueError("cat branches must share width and mass")

    @property
    def W(self) -> float:
        return self.a.W

    @property
    def m(self) -> float:
        return self.a.m

    # Derived center/difference coordinates (computed, not stored).
    @property
    def x_avg(self) -> float:
        return (self.a.x + self.b.x) / 2

    @property
    def p_avg(self) -> float:
        return (self.a.p + self.b.p) / 2

    @property
    def x_diff(self) -> float:
        return self.a.x - self.b.x

    @property
    def p_diff(self) -> float:
        return self.a.p - self.b.p

    def trace(self) -> float:
        cross = self.c * np.exp(1j * self.phi) * overlap(self.b, self.a)
        return float(2 + 2 * np.real(cross))

    def density_matrix(self, xgrid: np.ndarray, normalized: bool = False) -> np.ndarray:
        """Position-basis density matrix on a grid (units of 1/dx omitted)."""
        psi_a = self.a.wavefunction(xgrid)
        psi_b = self.b.wavefunction(xgrid)
        rho = (
            np.outer(psi_a, psi_a.conj())
            + np.outer(psi_b, psi_b.conj())
            + self.c * np.exp(1j * self.phi) * np.outer(psi_a, psi_b.conj())
            + self.c * np.exp(-1j * self.phi) * np.outer(psi_b, psi_a.conj())
        )
        if normalized:
            rho = rho / self.trace()
        return rho
