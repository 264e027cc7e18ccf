"""Density-matrix constructors and physical-validity checks.

States are plain complex ndarrays. Validity is always *reported*, never
silently repaired, so integrator drift stays detectable downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# One order above accumulated integrator error at the default step tolerance.
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-9


def localized_state(n: int, j: int) -> np.ndarray:
    """Rank-1 density matrix |j><j| on an n-node position basis."""
    if not 0 <= j < n:
        raise ValueError(f"node index {j} out of range for dimension {n}")
    rho = np.zeros((n, n), dtype=complex)
    rho[j, j] = 1.0
    return rho


@dataclass(frozen=True)
class StateDiagnostics:
    """Distance of a matrix from the density-matrix manifold."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def hermitian_ok(self) -> bool:
        return self.hermiticity_defect <= HERMITICITY_TOL

    @property
    def trace_ok(self) -> bool:
        return self.trace_defect <= TRACE_TOL

    @property
    def psd_ok(self) -> bool:
        return self.min_eigenvalue >= -PSD_TOL

    @property
    def ok(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.psd_ok


def validate(rho: np.ndarray) -> StateDiagnostics:
    """Report hermiticity, trace and positivity defects (never raises)."""
    herm = float(np.abs(rho - rho.conj().T).max())
    trace = float(abs(np.trace(rho) - 1.0))
    eigmin = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0).min())
    return StateDiagnostics(hermiticity_defect=herm, trace_defect=trace,
                            min_eigenvalue=eigmin)


def purity(rho: np.ndarray) -> float:
    """Tr rho^2: 1 for pure states, 1/dim for the maximally mixed state."""
    return float(np.real(np.sum(rho * rho.T)))


def snapshot_payload(rho: np.ndarray) -> dict:
    """Debug-dump form: row-major [re, im] pairs with a dim header."""
    n = rho.shape[0]
    entries = [[float(z.real), float(z.imag)] for z in rho.ravel()]
    return {"dim": n, "entries": entries}


def snapshot_to_state(payload: dict) -> np.ndarray:
    n = int(payload["dim"])
    flat = np.array([complex(re, im) for re, im in payload["entries"]])
    return flat.reshape(n, n)
