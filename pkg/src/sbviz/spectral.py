"""Smallest eigenpair of the signed Laplacian."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

DENSE_LIMIT = 2048


class SpectralError(ValueError):
    """Input violates the solver contract (non-square, non-symmetric, empty)."""


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, best_residual: float):
        self.best_residual = best_residual
        super().__init__(f"{message} (best residual {best_residual:.3e})")


@dataclass(frozen=True)
class SpectralResult:
    lambda_min: float
    eigenvector: np.ndarray
    residual: float
    multiplicity: int = 1
    method: str = "dense"

    def __post_init__(self) -> None:
        v = np.array(self.eigenvector, dtype=float)
        v.flags.writeable = False
        object.__setattr__(self, "eigenvector", v)


def default_tolerance(lap: np.ndarray) -> float:
    """1e-9 scaled by ``1 + ||L||_inf``."""
    norm = float(np.abs(lap).sum(axis=1).max()) if lap.size else 0.0
    return 1e-9 * (1.0 + norm)


def unit_vector(v: np.ndarray) -> np.ndarray:
    """Scale to unit norm, returning a fixed point of ``v / norm(v)``.

    Plain division can land one ulp off and oscillate; the fallback nudges the
    largest entry a few ulps until renormalising is an exact no-op.
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    for _ in range(8):
        w = v / np.linalg.norm(v)
        if np.array_equal(w, v):
            return v
        v = w
    i = int(np.argmax(np.abs(v)))
    for k in range(1, 65):
        for target in (0.0, np.copysign(np.inf, v[i])):
            c = v.copy()
            for _ in range(k):
                c[i] = np.nextafter(c[i], target)
            if np.array_equal(c / np.linalg.norm(c), c):
                return c
    return v


def canonical_sign(v: np.ndarray, rel_tie: float = 1e-6) -> np.ndarray:
    """Flip ``v`` so its largest-magnitude entry is non-negative.

    Entries within ``rel_tie`` (relative) of the maximum magnitude count as
    tied; the lowest index among them decides.
    """
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        return v.copy()
    mag = np.abs(v)
    top = mag.max()
    pivot = int(np.flatnonzero(mag >= top * (1.0 - rel_tie))[0])
    return -v if v[pivot] < 0 else v.copy()


def verify_residual(lap: np.ndarray, result: SpectralResult) -> float:
    """``||L v - lambda v||_2``, computed without touching solver state."""
    lap = np.asarray(lap, dtype=float)
    v = np.asarray(result.eigenvector, dtype=float)
    if lap.shape != (v.size, v.size):
        raise SpectralError(f"matrix {lap.shape} does not match vector of length {v.size}")
    return float(np.linalg.norm(lap @ v - result.lambda_min * v))


def _check_input(lap) -> np.ndarray:
    lap = np.asarray(lap, dtype=float)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise SpectralError(f"expected a square matrix, got shape {lap.shape}")
    if lap.shape[0] < 1:
        raise SpectralError("matrix order must be at least 1")
    if not np.array_equal(lap, lap.T):
        raise SpectralError("matrix is not symmetric")
    return lap


def _finish(lap, lam_raw, vec, tol, multiplicity, method) -> SpectralResult:
    if lam_raw < -tol:
        raise ConvergenceError(f"negative eigenvalue {lam_raw:.3e} for a PSD matrix", np.inf)
    lam = max(float(lam_raw), 0.0)
    vec = canonical_sign(unit_vector(vec))
    residual = float(np.linalg.norm(lap @ vec - lam * vec))
    if residual > tol:
        raise ConvergenceError("residual bound not met", residual)
    return SpectralResult(lam, vec, residual, multiplicity, method)


def _dense(lap: np.ndarray, tol: float) -> SpectralResult:
    # syev: Householder tridiagonalisation followed by implicit QL/QR
    w, vecs = scipy.linalg.eigh(lap, driver="ev", check_finite=True)
    lam_raw = float(w[0])
    multiplicity = int(np.count_nonzero(w - w[0] <= max(tol, 1e-9)))
    return _finish(lap, lam_raw, vecs[:, 0], tol, multiplicity, "dense")


def _inverse_iteration(lap: np.ndarray, tol: float, max_iter: int, block: int = 8) -> SpectralResult:
    """Block inverse iteration with a Rayleigh-Ritz step.

    A block of a few vectors converges at rate ``lambda_1 / lambda_{k+1}``
    instead of ``lambda_1 / lambda_2``, so close low eigenvalues do not stall it.
    """
    n = lap.shape[0]
    k = min(n, block)
    # L is PSD and may be singular; a tiny positive shift keeps L + sI factorable
    scale = float(np.abs(lap).sum(axis=1).max()) or 1.0
    shift = 1e-10 * scale
    factor = scipy.linalg.cho_factor(lap + shift * np.eye(n), lower=True)

    # deterministic start: all-ones with a bump, then low-frequency cosines
    idx = np.arange(n)
    x = np.empty((n, k))
    x[:, 0] = 1.0
    x[0, 0] += 0.5
    for j in range(1, k):
        x[:, j] = np.cos(np.pi * j * (idx + 0.5) / n) + 1e-3 * ((idx * (j + 1)) % 7)
    x, _ = np.linalg.qr(x)
    best = np.inf
    for _ in range(max_iter):
        x, _ = np.linalg.qr(scipy.linalg.cho_solve(factor, x))
        theta, ritz = np.linalg.eigh(x.T @ lap @ x)
        x = x @ ritz
        v = x[:, 0]
        lam = float(theta[0])
        res = float(np.linalg.norm(lap @ v - lam * v))
        best = min(best, res)
        if res <= tol:
            return _finish(lap, lam, v, tol, 1, "inverse")
    raise ConvergenceError(f"inverse iteration did not converge in {max_iter} steps", best)


def smallest_eigenpair(
    lap, tol_residual: float | None = None, method: str = "auto"
) -> SpectralResult:
    """Smallest eigenvalue and unit eigenvector of a symmetric PSD matrix.

    ``method`` is ``"dense"``, ``"inverse"`` or ``"auto"`` (dense up to
    order 2048). Raises :class:`SpectralError` on bad input and
    :class:`ConvergenceError` when the residual bound cannot be met.
    """
    lap = _check_input(lap)
    tol = default_tolerance(lap) if tol_residual is None else float(tol_residual)
    if tol <= 0:
        raise SpectralError("tol_residual must be positive")
    n = lap.shape[0]
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "inverse"
    if method == "dense":
        return _dense(lap, tol)
    if method == "inverse":
        return _inverse_iteration(lap, tol, max_iter=10 * n)
    raise SpectralError(f"unknown method {method!r}")
