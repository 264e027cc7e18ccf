"""Stretched-exponential fits of coherence decay curves.

The model is C(t) = C0 * exp(-(lambda * t)**beta). Fitting is derivative-free
(Nelder-Mead with restarts): the (lambda*t)**beta term has a gradient
singularity at t = 0 whenever beta < 1, and the curves can touch zero where a
log transform would explode, so we minimize the raw residual sum of squares.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

LAMBDA_BOUNDS = (1e-6, 1e3)
BETA_BOUNDS = (0.05, 5.0)
DEFAULT_RESTARTS = 5


def kohlrausch(t: np.ndarray, c0: float, lam: float, beta: float) -> np.ndarray:
    """Evaluate C0 * exp(-(lam*t)**beta) on nonnegative times."""
    return c0 * np.exp(-np.power(lam * np.asarray(t, dtype=float), beta))


@dataclass(frozen=True)
class FitResult:
    """Fitted stretched-exponential parameters with residual diagnostics."""

    c0: float
    lam: float
    beta: float
    rss: float
    converged: bool
    iterations: int
    window: tuple[float, float]
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "C0": self.c0,
            "lambda": self.lam,
            "beta": self.beta,
            "rss": self.rss,
            "converged": self.converged,
            "window": [self.window[0], self.window[1]],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def fit_window(times: np.ndarray, values: np.ndarray,
               t_min: float, t_max: float) -> tuple[np.ndarray, np.ndarray]:
    """Restrict a series to t_min <= t <= t_max (e.g. to drop t=0 transients)."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if t_min >= t_max:
        raise ValueError(f"need t_min < t_max, got [{t_min}, {t_max}]")
    mask = (times >= t_min) & (times <= t_max)
    if not mask.any():
        raise ValueError(f"window [{t_min}, {t_max}] contains no samples")
    return times[mask], values[mask]


def decay_segment(times: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decay profile of a curve: samples from its global maximum onward.

    Times are shifted so the segment starts at 0, matching the model's C(0)=C0
    reading where C0 is the peak value. This is the windowing used for the
    coherence-decay coefficient tables.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    i0 = int(np.argmax(values))
    return times[i0:] - times[i0], values[i0:]


def _initial_guess(times: np.ndarray, values: np.ndarray) -> tuple[float, float, float]:
    """C0 from the first sample, lambda from the half-crossing time, beta = 1."""
    c0 = float(values[0])
    below = np.nonzero(values < c0 / 2.0)[0]
    if len(below) and times[below[0]] > 0:
        lam = 1.0 / float(times[below[0]])
    else:
        lam = 1.0 / float(times[-1]) if times[-1] > 0 else 1.0
    return c0, lam, 1.0


def fit_stretched_exponential(times: np.ndarray, values: np.ndarray,
                              restarts: int = DEFAULT_RESTARTS,
                              seed: int = 0, max_iter: int = 6000) -> FitResult:
    """Least-squares fit of (C0, lambda, beta), deterministic given the seed.

    Runs Nelder-Mead from the heuristic initial guess plus `restarts` jittered
    starting points and keeps the lowest residual. Degenerate inputs (constant
    series, all-zero series) return converged=False instead of raising.

    Args:
        times: strictly increasing sample times, length >= 5.
        values: nonnegative series of matching length.
        restarts: number of jittered restarts after the heuristic start.
        seed: RNG seed for the restart jitter.
        max_iter: Nelder-Mead iteration cap per start.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape:
        raise ValueError("times and values must have equal length")
    if len(times) < 5:
        raise ValueError(f"need at least 5 points, got {len(times)}")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    if np.any(values < 0):
        raise ValueError("values must be nonnegative")

    vmax = float(values.max())
    window = (float(times[0]), float(times[-1]))
    if vmax <= 0.0 or np.ptp(values) <= 1e-12 * max(vmax, 1.0):
        return FitResult(c0=float(values.mean()), lam=0.0, beta=1.0,
                         rss=float(np.sum((values - values.mean()) ** 2)),
                         converged=False, iterations=0, window=window,
                         note="degenerate input: constant series, beta unidentifiable")

    bounds = [(0.0, 2.0 * vmax), LAMBDA_BOUNDS, BETA_BOUNDS]

    def sse(x: np.ndarray) -> float:
        resid = values - kohlrausch(times, x[0], x[1], x[2])
        return float(resid @ resid)

    c0_0, lam_0, beta_0 = _initial_guess(times, values)
    rng = np.random.default_rng(seed)
    starts = [(c0_0, lam_0, beta_0)]
    for _ in range(restarts):
        starts.append((
            vmax * rng.uniform(0.5, 1.5),
            float(np.clip(lam_0 * np.exp(rng.uniform(-1.6, 1.6)), *LAMBDA_BOUNDS)),
            float(np.exp(rng.uniform(np.log(0.3), np.log(3.0)))),
        ))

    best = None
    total_iters = 0
    for x0 in starts:
        res = minimize(sse, np.asarray(x0), method="Nelder-Mead", bounds=bounds,
                       options={"maxiter": max_iter, "maxfev": max_iter,
                                "xatol": 1e-11, "fatol": 1e-14})
        total_iters += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res

    c0, lam, beta = (float(v) for v in best.x)
    return FitResult(c0=c0, lam=lam, beta=beta, rss=float(best.fun),
                     converged=bool(best.success), iterations=total_iters,
                     window=window)
