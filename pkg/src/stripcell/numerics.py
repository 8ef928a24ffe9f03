"""Shared numerical utilities.

Overflow-safe hyperbolic helpers for the vertically periodized potentials,
finite-difference oracles used by the property checks, circle quadrature,
and an equilibrated dense least-squares wrapper.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg


def coth_csch2(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(coth(w), csch(w)**2)`` for complex ``w``.

    Uses q = exp(-2|Re w|) so the evaluation never overflows and keeps full
    relative accuracy in the exponentially small far field (|Re w| large),
    where coth -> +-1 and csch^2 -> 0.
    """
    w = np.asarray(w, dtype=complex)
    sgn = np.where(w.real < 0.0, -1.0, 1.0)
    q = np.exp(-2.0 * (sgn * w))
    denom = 1.0 - q
    coth = sgn * (1.0 + q) / denom
    csch2 = 4.0 * q / denom**2
    return coth, csch2


def logabs_sinh(w: np.ndarray) -> np.ndarray:
    """Return ``log|sinh(w)|`` for complex ``w``, overflow-safe for large |Re w|."""
    w = np.asarray(w, dtype=complex)
    wr = np.abs(w.real) + 1j * w.imag
    q = np.exp(-2.0 * wr)
    with np.errstate(divide="ignore"):
        return wr.real - np.log(2.0) + np.log(np.abs(1.0 - q))


def fd_gradient(f, p, h: float) -> np.ndarray:
    """Central-difference gradient of a scalar field ``f((x, y)) -> float``."""
    x, y = float(p[0]), float(p[1])
    gx = (f((x + h, y)) - f((x - h, y))) / (2.0 * h)
    gy = (f((x, y + h)) - f((x, y - h))) / (2.0 * h)
    return np.array([gx, gy])


def fd_laplacian(f, p, h: float) -> float:
    """5-point finite-difference Laplacian of ``f((x, y)) -> float``."""
    x, y = float(p[0]), float(p[1])
    s = f((x + h, y)) + f((x - h, y)) + f((x, y + h)) + f((x, y - h))
    return (s - 4.0 * f((x, y))) / h**2


def circle_points(center, n: int, radius: float = 1.0, offset: float = 0.0) -> np.ndarray:
    """Uniform points on a circle, returned as an (n, 2) array."""
    theta = offset + 2.0 * np.pi * np.arange(n) / n
    cx, cy = float(center[0]), float(center[1])
    return np.column_stack([cx + radius * np.cos(theta), cy + radius * np.sin(theta)])


def circle_quadrature(fvals: np.ndarray, radius: float = 1.0) -> float:
    """Trapezoid rule for a periodic integrand sampled uniformly on a circle.

    Spectrally accurate for smooth integrands; ``fvals`` are samples at
    equispaced angles and the result approximates the arclength integral.
    """
    return 2.0 * np.pi * radius * float(np.mean(fvals))


def affine_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares affine fit ``y ~ slope*x + intercept``.

    Returns ``(slope, intercept, rms_residual)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    A = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid**2)))


def lstsq_equilibrated(A: np.ndarray, b: np.ndarray, rcond: float = 1e-14):
    """Dense least squares with column equilibration.

    Columns are scaled to unit 2-norm before the rank-revealing solve; this is
    the conditioning control that makes the near-touching configurations
    workable.  Returns ``(x, cond, rank)`` where ``cond`` is the ratio of the
    largest to smallest retained singular value of the scaled matrix.
    """
    norms = np.linalg.norm(A, axis=0)
    norms = np.where(norms > 0.0, norms, 1.0)
    x_s, _, rank, sv = scipy.linalg.lstsq(A / norms, b, cond=rcond, lapack_driver="gelsd")
    if sv is not None and len(sv) and sv[0] > 0.0:
        smallest = sv[min(rank, len(sv)) - 1] if rank > 0 else sv[-1]
        cond = float(sv[0] / smallest) if smallest > 0 else np.inf
    else:
        cond = np.inf
    return x_s / norms, cond, int(rank)
