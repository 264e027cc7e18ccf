"""Shared test oracles, independent of the package's algebraic shortcuts."""

import numpy as np


def random_density_matrix(n: int, seed: int, rank: int | None = None) -> np.ndarray:
    """Ginibre-random valid density matrix."""
    rng = np.random.default_rng(seed)
    k = rank or n
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def literal_haken_strobl_rhs(laplacian: np.ndarray, rho: np.ndarray,
                             gamma: float) -> np.ndarray:
    """Eq-literal projector sum: -i[L,rho] + gamma sum_k (P_k rho P_k - 1/2 {P_k, rho})."""
    n = laplacian.shape[0]
    out = -1j * (laplacian @ rho - rho @ laplacian)
    for k in range(n):
        p = np.zeros((n, n), dtype=complex)
        p[k, k] = 1.0
        out += gamma * (p @ rho @ p.conj().T
                        - 0.5 * (p.conj().T @ p @ rho + rho @ p.conj().T @ p))
    return out


def literal_qsw_rhs(laplacian: np.ndarray, rho: np.ndarray, p_mix: float) -> np.ndarray:
    """Eq-literal double sum over P_kj = L_kj |k><j| including k = j."""
    n = laplacian.shape[0]
    out = -(1.0 - p_mix) * 1j * (laplacian @ rho - rho @ laplacian)
    for k in range(n):
        for j in range(n):
            op = np.zeros((n, n), dtype=complex)
            op[k, j] = laplacian[k, j]
            opd = op.conj().T
            out += p_mix * (op @ rho @ opd - 0.5 * (opd @ op @ rho + rho @ opd @ op))
    return out


def commutator_superoperator(h: np.ndarray) -> np.ndarray:
    """vec(-i[H, rho]) with column-stacking (Fortran) vectorization."""
    n = h.shape[0]
    eye = np.eye(n)
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


def dissipator_superoperator(op: np.ndarray) -> np.ndarray:
    """vec(D[op](rho)) with column-stacking vectorization."""
    n = op.shape[0]
    eye = np.eye(n)
    opd_op = op.conj().T @ op
    return (np.kron(op.conj(), op)
            - 0.5 * np.kron(eye, opd_op) - 0.5 * np.kron(opd_op.T, eye))


def liouvillian_matrix(model_kind: str, laplacian: np.ndarray, gamma: float = 0.1,
                       p_mix: float = 0.1) -> np.ndarray:
    """Full superoperator for a model, built from the literal Lindblad terms."""
    n = laplacian.shape[0]
    if model_kind == "noiseless":
        return commutator_superoperator(laplacian)
    if model_kind == "intrinsic":
        sup = commutator_superoperator(laplacian)
        eye = np.eye(n)
        l_left = np.kron(eye, laplacian)
        l_right = np.kron(laplacian.T, eye)
        comm = l_left - l_right
        return sup - (gamma / 2.0) * (comm @ comm)
    if model_kind == "haken_strobl":
        sup = commutator_superoperator(laplacian)
        for k in range(n):
            proj = np.zeros((n, n), dtype=complex)
            proj[k, k] = 1.0
            sup = sup + gamma * dissipator_superoperator(proj)
        return sup
    if model_kind == "qsw":
        sup = (1.0 - p_mix) * commutator_superoperator(laplacian)
        for k in range(n):
            for j in range(n):
                op = np.zeros((n, n), dtype=complex)
                op[k, j] = laplacian[k, j]
                sup = sup + p_mix * dissipator_superoperator(op)
        return sup
    raise ValueError(model_kind)


def propagate_superoperator(sup: np.ndarray, rho0: np.ndarray, t: float) -> np.ndarray:
    """Exact expm propagation of the vectorized state (oracle path)."""
    from scipy.linalg import expm

    n = rho0.shape[0]
    vec = rho0.ravel(order="F")
    return (expm(sup * t) @ vec).reshape(n, n, order="F")
