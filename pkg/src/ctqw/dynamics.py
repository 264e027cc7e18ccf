"""Propagation of the walker's density matrix under four evolution models.

The Hamiltonian is the graph Laplacian throughout. Unitary and intrinsic
dephasing trajectories use an exact closed form in the Laplacian eigenbasis;
position-basis dephasing and quantum stochastic walks integrate the matrix
ODE with an adaptive embedded Runge-Kutta scheme (Dormand-Prince 5(4)).

Model right-hand sides, with L the Laplacian and rho the state:

* noiseless      drho/dt = -i[L, rho]
* intrinsic      drho/dt = -i[L, rho] - (gamma/2) [L, [L, rho]]
* haken_strobl   drho/dt = -i[L, rho] + gamma (diag(rho) - rho)
* qsw            drho/dt = -(1-p) i[L, rho]
                           + p (diag(W q) - (1/2){S, rho}),
  where W = L∘L elementwise (diagonal included, so W_jj = degree_j^2),
  q = diag(rho), and S = diag(column sums of W).

The haken_strobl and qsw forms are the algebraic reductions of the literal
projector-Lindblad operator sums; tests check the equivalence entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError

MODEL_KINDS = ("noiseless", "intrinsic", "haken_strobl", "qsw")

DEFAULT_GAMMA = 0.1
DEFAULT_P = 0.1
DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class EvolutionModel:
    """Tagged choice of evolution law with its rate parameter."""

    kind: str
    gamma: float = 0.0
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind in ("intrinsic", "haken_strobl") and self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.kind == "qsw" and not 0 <= self.p <= 1:
            raise ValueError(f"p must be in [0, 1], got {self.p}")

    @classmethod
    def noiseless(cls) -> "EvolutionModel":
        return cls("noiseless")

    @classmethod
    def intrinsic(cls, gamma: float = DEFAULT_GAMMA) -> "EvolutionModel":
        return cls("intrinsic", gamma=gamma)

    @classmethod
    def haken_strobl(cls, gamma: float = DEFAULT_GAMMA) -> "EvolutionModel":
        return cls("haken_strobl", gamma=gamma)

    @classmethod
    def qsw(cls, p: float = DEFAULT_P) -> "EvolutionModel":
        return cls("qsw", p=p)

    def reduced(self) -> "EvolutionModel":
        """Collapse zero-rate dissipative models onto their exact limits."""
        if self.kind in ("intrinsic", "haken_strobl") and self.gamma == 0:
            return EvolutionModel.noiseless()
        if self.kind == "qsw" and self.p == 0:
            return EvolutionModel.noiseless()
        return self

    def label(self) -> str:
        if self.kind == "intrinsic" or self.kind == "haken_strobl":
            return f"{self.kind}(gamma={self.gamma})"
        if self.kind == "qsw":
            return f"qsw(p={self.p})"
        return self.kind


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Laplacian."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_laplacian(cls, laplacian: np.ndarray) -> "SpectralDecomposition":
        evals, evecs = np.linalg.eigh(laplacian)
        return cls(eigenvalues=evals, eigenvectors=evecs)

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sample times starting at t = 0."""

    t_end: float
    samples: int

    def __post_init__(self):
        if self.t_end <= 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.samples < 2:
            raise ValueError(f"need at least 2 samples, got {self.samples}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.samples)


def default_grid(n: int) -> TimeGrid:
    """Default grids: [0, 30] x 600 up to mid-size graphs, [0, 10] x 400 at n >= 100."""
    if n >= 100:
        return TimeGrid(t_end=10.0, samples=400)
    return TimeGrid(t_end=30.0, samples=600)


@dataclass(frozen=True)
class Trajectory:
    """Sampled density matrices rho(t) on a time grid."""

    times: np.ndarray
    states: np.ndarray  # shape (len(times), n, n)

    def __iter__(self):
        return zip(self.times, self.states)

    def __len__(self) -> int:
        return len(self.times)


def qsw_weights(laplacian: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Jump weights W = L∘L (diagonal included) and their column sums."""
    w = laplacian * laplacian
    return w, w.sum(axis=0)


def rhs(model: EvolutionModel, laplacian: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Time derivative of rho under the selected model."""
    if laplacian.shape != rho.shape:
        raise ValueError(
            f"dimension mismatch: L is {laplacian.shape}, rho is {rho.shape}")
    comm = laplacian @ rho - rho @ laplacian
    if model.kind == "noiseless":
        return -1j * comm
    if model.kind == "intrinsic":
        return -1j * comm - (model.gamma / 2.0) * (
            laplacian @ comm - comm @ laplacian)
    if model.kind == "haken_strobl":
        return -1j * comm + model.gamma * (np.diag(np.diag(rho)) - rho)
    # qsw
    w, s = qsw_weights(laplacian)
    q = np.real(np.diag(rho))
    gain = np.diag(w @ q).astype(complex)
    anti = 0.5 * (s[:, None] + s[None, :]) * rho
    return -(1.0 - model.p) * 1j * comm + model.p * (gain - anti)


def evolve_spectral(model: EvolutionModel, spectral: SpectralDecomposition,
                    rho0: np.ndarray, t: float) -> np.ndarray:
    """Exact state at time t for the noiseless and intrinsic models.

    In the Laplacian eigenbasis each element evolves independently:
    rho_mn(t) = rho_mn(0) * exp(-i w t - (gamma/2) w^2 t), w = E_m - E_n,
    so eigenbasis populations are constants of motion.
    """
    if model.kind not in ("noiseless", "intrinsic"):
        raise ValueError(f"spectral path only covers noiseless/intrinsic, got {model.kind}")
    gamma = model.gamma if model.kind == "intrinsic" else 0.0
    v = spectral.eigenvectors
    omega = spectral.eigenvalues[:, None] - spectral.eigenvalues[None, :]
    rho_eig = v.conj().T @ rho0 @ v
    factor = np.exp((-1j * omega - (gamma / 2.0) * omega**2) * t)
    return v @ (rho_eig * factor) @ v.conj().T


def _rk_rhs(model: EvolutionModel, laplacian: np.ndarray):
    """Flattened-state RHS closure with model constants precomputed."""
    n = laplacian.shape[0]
    if model.kind == "haken_strobl":
        gamma = model.gamma

        def f(_t: float, y: np.ndarray) -> np.ndarray:
            rho = y.reshape(n, n)
            d = -1j * (laplacian @ rho - rho @ laplacian)
            d += gamma * (np.diag(np.diag(rho)) - rho)
            return d.ravel()

        return f
    if model.kind == "qsw":
        p = model.p
        w, s = qsw_weights(laplacian)
        anti_rates = 0.5 * (s[:, None] + s[None, :])

        def f(_t: float, y: np.ndarray) -> np.ndarray:
            rho = y.reshape(n, n)
            d = -(1.0 - p) * 1j * (laplacian @ rho - rho @ laplacian)
            d -= p * anti_rates * rho
            d[np.diag_indices(n)] += p * (w @ np.real(np.diag(rho)))
            return d.ravel()

        return f
    raise ValueError(f"no RK path for model {model.kind}")


def evolve(model: EvolutionModel, laplacian: np.ndarray, rho0: np.ndarray,
           grid: TimeGrid, tol: float = DEFAULT_TOL,
           spectral: SpectralDecomposition | None = None) -> Trajectory:
    """Propagate rho0 over the grid under the selected model.

    Noiseless and intrinsic evolution (including the gamma=0 / p=0 limits of
    the dissipative models) use the exact spectral path; haken_strobl and qsw
    use adaptive RK45 with per-step error bounded by tol, sampled at the grid
    times via dense output.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    model = model.reduced()
    times = grid.times
    if model.kind in ("noiseless", "intrinsic"):
        if spectral is None:
            spectral = SpectralDecomposition.from_laplacian(laplacian)
        states = np.stack([evolve_spectral(model, spectral, rho0, t) for t in times])
        return Trajectory(times=times, states=states)

    n = laplacian.shape[0]
    sol = solve_ivp(_rk_rhs(model, laplacian), (times[0], times[-1]),
                    rho0.astype(complex).ravel(), method="RK45",
                    t_eval=times, rtol=tol, atol=tol)
    if not sol.success:
        last = float(sol.t[-1]) if len(sol.t) else 0.0
        raise IntegrationError(
            f"RK45 failed for {model.label()}: {sol.message}", last_good_time=last)
    return Trajectory(times=times, states=sol.y.T.reshape(len(times), n, n))


def classical_heat_kernel(laplacian: np.ndarray, t: float,
                          spectral: SpectralDecomposition | None = None) -> np.ndarray:
    """Transition matrix exp(-L t) of the continuous-time random walk.

    Computed spectrally; exp(-L t) is provably nonnegative, so entries in
    [-1e-12, 0) are numeric noise and get clamped to zero.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if spectral is None:
        spectral = SpectralDecomposition.from_laplacian(laplacian)
    v = spectral.eigenvectors
    kernel = (v * np.exp(-spectral.eigenvalues * t)) @ v.conj().T
    kernel = np.real(kernel)
    return np.where((kernel < 0) & (kernel >= -1e-12), 0.0, kernel)


def triangle_analytic(t: float) -> np.ndarray:
    """Closed-form noiseless state on the triangle graph, started at node 0."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    c = np.cos(3.0 * t)
    off_top = -1.0 + 2.0 * np.exp(-3j * t) - np.exp(3j * t)
    rho = np.array([
        [5.0 + 4.0 * c, off_top, off_top],
        [np.conj(off_top), 2.0 - 2.0 * c, 2.0 - 2.0 * c],
        [np.conj(off_top), 2.0 - 2.0 * c, 2.0 - 2.0 * c],
    ], dtype=complex)
    return rho / 9.0
