"""Closed-form asymptotic objects and their coefficients.

Exact evaluators for the image-point pair potentials (the single-row-gap
functions phi_n, their lattice sum tilde-phi, and the per-gap functions phi_h
and phi_v), the shear term S(x, y), the leading-order gap gradient fields,
and the coefficients lambda, mu, alpha, alpha_h, beta_v extracted from solved
cells.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BackgroundField
from .geometry import CellConfig, StripRegion, contains
from .solver import CellSolution, FLUX_PHI, image_focus, shift_constant


@dataclass(frozen=True)
class ImagePair:
    """Equivalent point-source pair for one gap.

    ``p_exact = sqrt(gap + gap^2/4)`` is the unique offset for which the
    monopole difference field is constant on both unit circles; it equals
    sqrt(gap) to leading order.
    """

    gap: float
    p_exact: float
    axis: str  # 'horizontal' | 'vertical'
    anchor: tuple[float, float]

    @property
    def leading_order(self) -> float:
        return float(np.sqrt(self.gap))


def image_point(gap: float, axis: str = "horizontal", anchor: tuple[float, float] = (0.0, 0.0)) -> ImagePair:
    """Image pair for a gap of the given width; raises on nonpositive gaps."""
    if axis not in ("horizontal", "vertical"):
        raise ValueError(f"axis must be horizontal or vertical, got {axis!r}")
    return ImagePair(gap=float(gap), p_exact=image_focus(gap), axis=axis, anchor=anchor)


def _pair_field(pts, pole_plus, pole_minus, scale: float) -> tuple[np.ndarray, np.ndarray]:
    """scale * (log|r - pole_plus| - log|r - pole_minus|) with gradient."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    z = pts[:, 0] + 1j * pts[:, 1]
    za = z - complex(*pole_plus)
    zb = z - complex(*pole_minus)
    if np.any(za == 0) or np.any(zb == 0):
        raise ValueError("evaluation point coincides with an image pole")
    vals = scale * (np.log(np.abs(za)) - np.log(np.abs(zb)))
    fp = scale * (1.0 / za - 1.0 / zb)
    return vals, np.column_stack([fp.real, -fp.imag])


def phi_n(pts, n: int, cfg: CellConfig) -> tuple[np.ndarray, np.ndarray]:
    """Row-n horizontal-gap pair potential.

    (1/2pi) * (log|x - (-p, nL)| - log|x - (p, nL)|) with the exact image
    offset p; constant on both row-n circles, unit inward flux on the right
    disk and minus one on the left, O(1/|x|) decay.
    """
    p = image_focus(cfg.eps)
    y = n * cfg.period
    return _pair_field(pts, (-p, y), (p, y), 1.0 / (2.0 * np.pi))


def tilde_phi(pts, cfg: CellConfig, n_cutoff: int = 10_000, accelerate: bool = True) -> np.ndarray:
    """Symmetric partial sum of the phi_n over rows |n| <= n_cutoff.

    The n and -n terms pair up to O(1/n^2), so the raw tail is O(1/N); with
    ``accelerate`` one Richardson step (S + (S_N - S_{N/2})) removes it.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    p = image_focus(cfg.eps)
    z = pts[:, 0] + 1j * pts[:, 1]
    ns = np.arange(-n_cutoff, n_cutoff + 1)
    half = None
    total = np.zeros(len(z))
    for i, zz in enumerate(z):
        dz = zz - (-p + 1j * ns * cfg.period)
        dw = zz - (p + 1j * ns * cfg.period)
        terms = (np.log(np.abs(dz)) - np.log(np.abs(dw))) / (2.0 * np.pi)
        total[i] = terms.sum()
        if accelerate:
            inner = np.abs(ns) <= n_cutoff // 2
            if half is None:
                half = np.zeros(len(z))
            half[i] = terms[inner].sum()
    if accelerate:
        return total + (total - half)
    return total


def tilde_phi_closed(pts, cfg: CellConfig) -> np.ndarray:
    """Closed form of the lattice sum: periodized image pair via log sinh."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    p = image_focus(cfg.eps)
    z = pts[:, 0] + 1j * pts[:, 1]
    L = cfg.period
    wa = np.pi * (z + p) / L
    wb = np.pi * (z - p) / L
    from .numerics import logabs_sinh

    return (logabs_sinh(wa) - logabs_sinh(wb)) / (2.0 * np.pi)


def alpha_coefficient(cfg: CellConfig, sol_phi: CellSolution, n_cutoff: int = 10_000) -> float:
    """Ratio of the lattice-sum midline jump to the solved pair-potential jump.

    alpha = (tilde_phi(eps/2, 0) - tilde_phi(-eps/2, 0)) / (c_R - c_L of the
    unit-flux pair solution); satisfies 0 < 1 - alpha <= C sqrt(eps).
    """
    if sol_phi.flux != FLUX_PHI:
        raise ValueError("alpha_coefficient needs the unit-flux pair solution")
    pts = np.array([[0.5 * cfg.eps, 0.0], [-0.5 * cfg.eps, 0.0]])
    tp = tilde_phi(pts, cfg, n_cutoff=n_cutoff)
    denom = sol_phi.c_R - sol_phi.c_L
    if abs(denom) < 1e-300:
        raise ZeroDivisionError("degenerate pair-potential difference")
    return float((tp[0] - tp[1]) / denom)


def phi_h(pts, cfg: CellConfig) -> tuple[np.ndarray, np.ndarray]:
    """Vertical-gap pair potential between rows 0 and 1 of column R.

    (1/sqrt(delta)) * (log|r - (x_R, y_gap - p_h)| - log|r - (x_R, y_gap + p_h)|)
    with p_h the exact image offset for gap delta; inward flux 2pi/sqrt(delta)
    on the row-1 disk.
    """
    p = image_focus(cfg.delta)
    xg, yg = cfg.x_right, 1.0 + 0.5 * cfg.delta
    return _pair_field(pts, (xg, yg - p), (xg, yg + p), 1.0 / np.sqrt(cfg.delta))


def phi_v(pts, cfg: CellConfig) -> tuple[np.ndarray, np.ndarray]:
    """Horizontal-gap pair potential between the row-0 disks.

    log|r + (p_v, 0)| - log|r - (p_v, 0)| with the exact image offset for gap
    eps; inward flux 2pi on the right disk.
    """
    p = image_focus(cfg.eps)
    return _pair_field(pts, (-p, 0.0), (p, 0.0), 1.0)


def phi_h_boundary_value(cfg: CellConfig) -> float:
    """phi_h on the row-1 circle (exactly constant there); minus this on row 0."""
    p = image_focus(cfg.delta)
    # nearest boundary point of the row-1 disk: (x_R, 1 + delta)
    return float((np.log(p + 0.5 * cfg.delta) - np.log(p - 0.5 * cfg.delta)) / np.sqrt(cfg.delta))


def phi_v_boundary_value(cfg: CellConfig) -> float:
    """phi_v on the right circle (exactly constant there); minus this on the left."""
    p = image_focus(cfg.eps)
    return float(np.log(p + 0.5 * cfg.eps) - np.log(p - 0.5 * cfg.eps))


def S_term(pts, cfg: CellConfig) -> np.ndarray:
    """Shear factor of the vertical-gap asymptote.

    S = -2 sqrt(delta) * X*Y / (X^2 + delta)^2 with X, Y the offsets from the
    gap center; it vanishes at the center and stays below 2 in sup norm over
    the narrow region.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    X = pts[:, 0] - cfg.x_right
    Y = pts[:, 1] - (1.0 + 0.5 * cfg.delta)
    return -2.0 * np.sqrt(cfg.delta) * X * Y / (X**2 + cfg.delta) ** 2


@dataclass(frozen=True)
class AsymptoteModel:
    """Leading-order gap gradient: coefficient lambda on N_h or mu on N_v."""

    region: str  # 'nh' | 'nv'
    coefficient: float
    cfg: CellConfig

    def __post_init__(self):
        if self.region not in ("nh", "nv"):
            raise ValueError(f"region must be 'nh' or 'nv', got {self.region!r}")


def asymptote_gradient(model: AsymptoteModel, pts, check_region: bool = True) -> np.ndarray:
    """The main-term gradient of the model at points of its region.

    N_h: lambda * ( S(x,y)/sqrt(delta), 1/(delta + X^2) );
    N_v: mu * sqrt(eps)/(eps + y^2) * (1, 0).
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    cfg = model.cfg
    if check_region:
        region = StripRegion.nh() if model.region == "nh" else StripRegion.nv()
        for p in pts:
            if not contains(region, p, cfg):
                raise ValueError(f"point {p} outside region {model.region}")
    if model.region == "nh":
        X = pts[:, 0] - cfg.x_right
        gx = S_term(pts, cfg) / np.sqrt(cfg.delta)
        gy = 1.0 / (cfg.delta + X**2)
        return model.coefficient * np.column_stack([gx, gy])
    y = pts[:, 1]
    gx = np.sqrt(cfg.eps) / (cfg.eps + y**2)
    return model.coefficient * np.column_stack([gx, np.zeros_like(gx)])


def lambda_coefficient(H: BackgroundField) -> float:
    """Vertical-gap asymptote coefficient: H(0, 1) - H(0, -1)."""
    vals = H.value(np.array([[0.0, 1.0], [0.0, -1.0]]))
    return float(vals[0] - vals[1])


def alpha_h(sol_u: CellSolution, cfg: CellConfig) -> float:
    """Vertical-gap decomposition coefficient of a solved cell.

    Ratio of the row-to-row potential shift (exact, from the period-shift
    formula) to the phi_h boundary jump; within O(delta * ||H||) of
    (H(0,1) - H(0,-1))/2.
    """
    denom = 2.0 * phi_h_boundary_value(cfg)
    return float(shift_constant(sol_u.H, cfg) / denom)


def beta_v(sol_u: CellSolution, cfg: CellConfig) -> float:
    """Horizontal-gap decomposition coefficient: (c_R - c_L) / phi_v jump."""
    denom = 2.0 * phi_v_boundary_value(cfg)
    return float((sol_u.c_R - sol_u.c_L) / denom)


def mu_extract(sol_u: CellSolution, cfg: CellConfig) -> float:
    """Operational N_v asymptote coefficient.

    The mean of d_x u over the gap segment equals (c_R - c_L)/eps, and the
    normalized main term integrates to sqrt(eps) over that segment, so
    mu = (c_R - c_L)/sqrt(eps).
    """
    return float((sol_u.c_R - sol_u.c_L) / np.sqrt(cfg.eps))
