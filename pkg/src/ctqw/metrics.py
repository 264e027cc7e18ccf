"""Stability quantifiers computed along a trajectory.

Five quantities per sampled time: node occupations, l1-norm of coherence,
Uhlmann fidelity with the initial state, von Neumann entropy, and the
quantum-classical distance against the heat-kernel random walk.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .dynamics import SpectralDecomposition, Trajectory, classical_heat_kernel
from .errors import InvalidStateError

DQC_MODES = ("fixed_initial", "min_over_localized")
ENTROPY_BASES = ("ln", "log2")

# Tr(rho^2) above this counts as pure and enables the exact overlap fast path.
_PURITY_CUTOFF = 1.0 - 1e-12


@dataclass(frozen=True)
class MetricRecord:
    """All stability quantifiers at one sampled time."""

    t: float
    occupations: np.ndarray
    l1_coherence: float
    fidelity_with_initial: float
    entropy: float
    d_qc: float


def occupation_probabilities(rho: np.ndarray) -> np.ndarray:
    """Real diagonal of rho, clamped at zero for reporting."""
    return np.maximum(np.real(np.diag(rho)), 0.0)


def l1_coherence(rho: np.ndarray) -> float:
    """Sum of magnitudes of all off-diagonal elements."""
    mags = np.abs(rho)
    return float(mags.sum() - np.trace(mags))


def _sqrt_psd(rho: np.ndarray) -> np.ndarray:
    """Matrix square root via eigendecomposition, clamping noise eigenvalues."""
    evals, evecs = np.linalg.eigh((rho + rho.conj().T) / 2.0)
    return (evecs * np.sqrt(np.maximum(evals, 0.0))) @ evecs.conj().T


def _purity(rho: np.ndarray) -> float:
    return float(np.real(np.sum(rho * rho.T)))


def fidelity(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """Uhlmann fidelity [Tr sqrt(sqrt(a) b sqrt(a))]^2, clipped to [0, 1].

    When either argument is pure the fidelity reduces to the state overlap
    Tr(a b), which is cheaper and exact.
    """
    if rho_a.shape != rho_b.shape:
        raise ValueError(f"dimension mismatch: {rho_a.shape} vs {rho_b.shape}")
    if _purity(rho_a) >= _PURITY_CUTOFF or _purity(rho_b) >= _PURITY_CUTOFF:
        overlap = float(np.real(np.sum(rho_a * rho_b.T)))
        return float(np.clip(overlap, 0.0, 1.0))
    root = _sqrt_psd(rho_a)
    inner = root @ rho_b @ root
    evals = np.linalg.eigvalsh((inner + inner.conj().T) / 2.0)
    value = float(np.sqrt(np.maximum(evals, 0.0)).sum() ** 2)
    return float(np.clip(value, 0.0, 1.0))


def von_neumann_entropy(rho: np.ndarray, base: str = "ln") -> float:
    """-Tr(rho log rho) over the eigenvalues, with 0 log 0 := 0.

    Eigenvalues in [-1e-9, 0) are clamped to zero; anything below that is a
    physical-validity violation and raises.
    """
    if base not in ENTROPY_BASES:
        raise ValueError(f"unknown entropy base {base!r}")
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    if evals.min() < -1e-9:
        raise InvalidStateError(
            f"eigenvalue {evals.min():.3e} below -1e-9; not a density matrix")
    evals = np.maximum(evals, 0.0)
    positive = evals[evals > 0.0]
    entropy = float(-(positive * np.log(positive)).sum()) + 0.0
    if base == "log2":
        entropy /= np.log(2.0)
    return entropy


def classical_state(laplacian: np.ndarray, t: float, j: int,
                    spectral: SpectralDecomposition | None = None) -> np.ndarray:
    """Diagonal density matrix of the classical walk started at node j."""
    kernel = classical_heat_kernel(laplacian, t, spectral=spectral)
    return np.diag(kernel[:, j]).astype(complex)


def quantum_classical_distance(rho_q: np.ndarray, laplacian: np.ndarray, t: float,
                               initial_node: int | None = None,
                               mode: str = "fixed_initial",
                               spectral: SpectralDecomposition | None = None) -> float:
    """1 - F between the quantum state and the classically evolved state.

    fixed_initial compares against the classical walk from the same initial
    node; min_over_localized takes the minimum over all localized classical
    starting nodes, which upper-bounds nothing but costs O(n) fidelities.
    """
    if mode not in DQC_MODES:
        raise ValueError(f"unknown d_qc mode {mode!r}")
    kernel = classical_heat_kernel(laplacian, t, spectral=spectral)
    if mode == "fixed_initial":
        if initial_node is None:
            raise ValueError("fixed_initial mode requires the initial node")
        cl = np.diag(kernel[:, initial_node]).astype(complex)
        return float(np.clip(1.0 - fidelity(cl, rho_q), 0.0, 1.0))
    best = -np.inf
    for j in range(laplacian.shape[0]):
        cl = np.diag(kernel[:, j]).astype(complex)
        best = max(best, fidelity(cl, rho_q))
    return float(np.clip(1.0 - best, 0.0, 1.0))


def metric_series(trajectory: Trajectory, laplacian: np.ndarray, initial_node: int,
                  dqc_mode: str = "fixed_initial", entropy_base: str = "ln",
                  spectral: SpectralDecomposition | None = None) -> list[MetricRecord]:
    """One MetricRecord per sampled time of the trajectory."""
    if spectral is None:
        spectral = SpectralDecomposition.from_laplacian(laplacian)
    n = laplacian.shape[0]
    psi0 = np.zeros(n, dtype=complex)
    psi0[initial_node] = 1.0
    records = []
    for t, rho in trajectory:
        # fidelity with |j><j| reduces to the occupation of the initial node
        fid = float(np.clip(np.real(rho[initial_node, initial_node]), 0.0, 1.0))
        records.append(MetricRecord(
            t=float(t),
            occupations=occupation_probabilities(rho),
            l1_coherence=l1_coherence(rho),
            fidelity_with_initial=fid,
            entropy=von_neumann_entropy(rho, base=entropy_base),
            d_qc=quantum_classical_distance(rho, laplacian, float(t),
                                            initial_node=initial_node,
                                            mode=dqc_mode, spectral=spectral),
        ))
    return records


def _fmt(x: float) -> str:
    """Shortest round-trip decimal; byte-stable across runs."""
    return repr(float(x))


def metrics_header(n: int, emit_occupations: bool) -> list[str]:
    cols = ["t", "l1_coherence", "fidelity", "entropy", "d_qc"]
    if emit_occupations:
        cols += [f"p_{k}" for k in range(n)]
    return cols


def write_metrics_csv(path, records: Iterable[MetricRecord],
                      emit_occupations: bool = False) -> None:
    records = list(records)
    n = len(records[0].occupations) if records else 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(metrics_header(n, emit_occupations))
        for rec in records:
            row = [_fmt(rec.t), _fmt(rec.l1_coherence), _fmt(rec.fidelity_with_initial),
                   _fmt(rec.entropy), _fmt(rec.d_qc)]
            if emit_occupations:
                row += [_fmt(p) for p in rec.occupations]
            writer.writerow(row)


def read_metrics_csv(path) -> dict[str, np.ndarray]:
    """Columns of a metrics CSV keyed by header name."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader]
    data = np.array(rows) if rows else np.zeros((0, len(header)))
    return {name: data[:, i] for i, name in enumerate(header)}
