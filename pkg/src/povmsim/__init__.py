"""povmsim: open-quantum-system dynamics from a measurement perspective.

Two model families share the numeric core:

* adiabatic dark-state transport on a quantum-dot chain, dephased by a rail
  of weak charge sensors (Markovian) and by two-level fluctuators
  (non-Markovian, solved exactly by block dynamics);
* one-dimensional collisional quantum Brownian motion built from Gaussian
  two-packet collisions, their POVM reading, thermal collision statistics,
  moment dynamics, and Wigner-function decoherence, with the classical jump
  process as the brute-force oracle.

Natural units hbar = k_B = 1 throughout.
"""

from . import classical, collision, core, ctap, gaussian, measurement, qbm, qpc, tls, wigner

__version__ = "0.1.0"

__all__ = [
    "classical",
    "collision",
    "core",
    "ctap",
    "gaussian",
    "measurement",
    "qbm",
    "qpc",
    "tls",
    "wigner",
]
