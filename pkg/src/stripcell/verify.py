"""Measured verification of the asymptotic claims.

Each check recomputes everything it needs from fresh solves (checks never
read each other's outputs), judges its measurements against declared
tolerances, and reports rows suitable for CSV emission.  Claims with abstract
uniform constants are operationalized as factor-stability gates over the
default three-decade sweeps.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import (
    AsymptoteModel,
    alpha_coefficient,
    asymptote_gradient,
    lambda_coefficient,
    mu_extract,
)
from .basis import BackgroundField
from .geometry import CellConfig, StripRegion, sample_region
from .numerics import affine_fit, fd_gradient, fd_laplacian
from .solver import (
    BoundaryProblem,
    disk_flux,
    integral_identity,
    shift_constant,
    solve,
    solve_phi,
    solve_truncated_oracle,
)

#: default sweep grid, three decades in half-decade steps
SWEEP_GRID = (1e-1, 10**-1.5, 1e-2, 10**-2.5, 1e-3)

#: gate for claims of the form "bounded by a constant C": the measured values
#: over a sweep may vary by at most this factor and must not blow up
STABILITY_FACTOR = 3.0


@dataclass
class CheckResult:
    """Outcome of one verification check with the tolerance it was judged at."""

    name: str
    claim_ref: str
    measured: dict
    tol: dict
    passed: bool
    seconds: float = 0.0
    rows: list = field(default_factory=list)

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name} ({self.claim_ref})"


@dataclass
class RateFit:
    """Affine fit of log10(max gradient) against log10(gap)."""

    abscissa: list
    ordinate: list
    slope: float
    intercept: float
    residual: float

    @classmethod
    def from_sweep(cls, gaps, values) -> "RateFit":
        if len(gaps) < 4:
            raise ValueError("rate fits need at least 4 sweep points")
        lx = np.log10(np.asarray(gaps, dtype=float))
        ly = np.log10(np.asarray(values, dtype=float))
        slope, intercept, resid = affine_fit(lx, ly)
        return cls(list(lx), list(ly), slope, intercept, resid)


def _row(check: str, cfg: CellConfig, n: int, measured: float, expected: float, tol: float, ok: bool, sec: float) -> dict:
    return {
        "check": check,
        "eps": cfg.eps,
        "delta": cfg.delta,
        "N": n,
        "measured": measured,
        "expected": expected,
        "tol": tol,
        "pass": ok,
        "seconds": round(sec, 3),
    }


# ---------------------------------------------------------------------------
# region grids for sup-norm measurements
# ---------------------------------------------------------------------------


def region_grid(region: StripRegion, cfg: CellConfig, n_across: int = 41, n_levels: int = 7) -> np.ndarray:
    """Deterministic graded grid over a narrow region.

    The coordinate along the gap is cubically clustered at the gap center
    (where the field peaks at scale sqrt(gap)) and includes the center
    exactly; transverse levels stay a fixed fraction inside the bounding
    circles, which is the operational reading of the open-region sup.
    """
    if region.kind not in ("nv", "nh"):
        raise ValueError("region grids exist for nv/nh only")
    n_across += 1 - n_across % 2  # odd, so the centerline is included
    u = np.linspace(-1.0, 1.0, n_across)
    along = (np.sqrt(3.0) / 2.0) * u**3
    levels = np.linspace(-0.95, 0.95, n_levels)
    pts = []
    for t in along:
        reach_gap = 1.0 + 0.5 * (cfg.eps if region.kind == "nv" else cfg.delta)
        cap = reach_gap - np.sqrt(1.0 - t**2)
        for lv in levels:
            if region.kind == "nv":
                pts.append((cap * lv, t))
            else:
                pts.append((cfg.x_right + t, (1.0 + 0.5 * cfg.delta) + cap * lv))
    return np.array(pts)


def _max_gradient(sol, region: StripRegion, cfg: CellConfig) -> tuple[float, np.ndarray, np.ndarray]:
    grid = region_grid(region, cfg)
    g = sol.gradient(grid)
    mags = np.hypot(g[:, 0], g[:, 1])
    return float(np.max(mags)), grid, g


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------


def check_prop21(cfg: CellConfig, H: BackgroundField, n_order: int = 40) -> CheckResult:
    """Solver period shift equals the exact vertical potential difference."""
    t0 = time.time()
    sol = solve(BoundaryProblem(cfg=cfg, H=H), n_order=n_order)
    exact = shift_constant(H, cfg)
    pts = np.array([[0.1, 0.37], [1.6, -0.8], [-2.3, 0.55], [0.0, 1.02]])
    shifted = pts + [0.0, cfg.period]
    measured = sol.value(shifted) - sol.value(pts)
    err = float(np.max(np.abs(measured - exact)))
    tol = 10.0 * max(sol.residual, 1e-12)
    sec = time.time() - t0
    ok = err < tol
    return CheckResult(
        name="prop21_period_shift",
        claim_ref="vertical potential difference identity",
        measured={"shift": float(np.mean(measured)), "exact": exact, "max_error": err},
        tol={"abs": tol},
        passed=ok,
        seconds=sec,
        rows=[_row("prop21", cfg, n_order, float(np.mean(measured)), exact, tol, ok, sec)],
    )


def check_prop22_sweep(
    delta: float = 0.1,
    eps_list: tuple = SWEEP_GRID,
    delta_list: tuple = (0.05, 0.1, 0.2),
    eps_for_delta: float = 1e-2,
    n_order: int = 40,
) -> CheckResult:
    """(c_R - c_L)/sqrt(eps) positive and factor-stable for H = x."""
    t0 = time.time()
    H = BackgroundField(a=1.0)
    rows, ratios = [], []
    for eps in eps_list:
        cfg = CellConfig(eps=eps, delta=delta)
        t1 = time.time()
        sol = solve(BoundaryProblem(cfg=cfg, H=H), n_order=n_order)
        r = (sol.c_R - sol.c_L) / np.sqrt(eps)
        ratios.append(r)
        rows.append(_row("prop22_eps", cfg, n_order, r, np.nan, STABILITY_FACTOR, r > 0, time.time() - t1))
    dratios = []
    for dl in delta_list:
        cfg = CellConfig(eps=eps_for_delta, delta=dl)
        t1 = time.time()
        sol = solve(BoundaryProblem(cfg=cfg, H=H), n_order=n_order)
        r = (sol.c_R - sol.c_L) / np.sqrt(eps_for_delta)
        dratios.append(r)
        rows.append(_row("prop22_delta", cfg, n_order, r, np.nan, 2.0, r > 0, time.time() - t1))
    ratios = np.array(ratios)
    spread = float(ratios.max() / ratios.min()) if ratios.min() > 0 else np.inf
    dspread = float(max(dratios) / min(dratios)) if min(dratios) > 0 else np.inf
    ok = bool(np.all(ratios > 0) and spread <= STABILITY_FACTOR and dspread <= 2.0)
    return CheckResult(
        name="prop22_sqrt_eps_scaling",
        claim_ref="bracketed sqrt(eps) potential difference for H=x",
        measured={"ratios": ratios.tolist(), "spread": spread, "delta_spread": dspread},
        tol={"positive": 0.0, "spread_factor": STABILITY_FACTOR, "delta_factor": 2.0},
        passed=ok,
        seconds=time.time() - t0,
        rows=rows,
    )


def _field_tag(H: BackgroundField) -> str:
    parts = []
    if H.a:
        parts.append(f"{H.a:g}x" if H.a != 1 else "x")
    if H.b:
        parts.append(f"{H.b:g}y" if H.b != 1 else "y")
    if H.const:
        parts.append(f"{H.const:g}")
    parts.extend(f"mode{md.j}" for md in H.modes)
    return "+".join(parts) or "0"


def check_identity(cfg: CellConfig, H: BackgroundField, n_order: int = 40, rel_tol: float = 1e-8) -> CheckResult:
    """Agreement of the two routes to the pair potential difference."""
    t0 = time.time()
    sol_phi = solve_phi(cfg, n_order=n_order)
    lhs, rhs = integral_identity(sol_phi, H)
    scale = max(abs(lhs), abs(rhs), 0.1)
    err = abs(lhs - rhs) / scale
    ok = err <= rel_tol
    sec = time.time() - t0
    return CheckResult(
        name=f"prop24_integral_identity_{_field_tag(H)}",
        claim_ref="boundary integral route to c_R - c_L",
        measured={"lhs": lhs, "rhs": rhs, "rel_error": err},
        tol={"rel": rel_tol},
        passed=ok,
        seconds=sec,
        rows=[_row("prop24", cfg, n_order, lhs, rhs, rel_tol, ok, sec)],
    )


def check_thm11(
    cfg: CellConfig,
    H: BackgroundField,
    region: StripRegion,
    n_order: int = 40,
    bound_factor: float = 8.0,
) -> CheckResult:
    """Remainder of the leading-order asymptote over one narrow-region grid.

    Reports max |grad u|, the sup of |grad u - main term| and their ratio;
    the remainder must stay below ``bound_factor`` times the background sup
    norm over the measurement window.
    """
    t0 = time.time()
    sol = solve(BoundaryProblem(cfg=cfg, H=H), n_order=n_order)
    if region.kind == "nh":
        coeff = lambda_coefficient(H)
    else:
        coeff = mu_extract(sol, cfg)
    model = AsymptoteModel(region=region.kind, coefficient=coeff, cfg=cfg)
    max_grad, grid, g = _max_gradient(sol, region, cfg)
    main = asymptote_gradient(model, grid, check_region=False)
    resid = float(np.max(np.hypot(*(g - main).T)))
    hnorm = H.sup_norm(cfg)
    ratio = resid / max_grad if max_grad > 0 else 0.0
    ok = resid <= bound_factor * hnorm
    sec = time.time() - t0
    return CheckResult(
        name=f"thm11_remainder_{region.kind}",
        claim_ref="leading-order gap asymptote with bounded remainder",
        measured={
            "coefficient": coeff,
            "max_grad": max_grad,
            "max_resid": resid,
            "ratio": ratio,
            "H_norm": hnorm,
        },
        tol={"resid_bound": bound_factor * hnorm},
        passed=ok,
        seconds=sec,
        rows=[_row(f"thm11_{region.kind}", cfg, n_order, resid, np.nan, bound_factor * hnorm, ok, sec)],
    )


def check_rates(
    eps_fixed: float = 0.1,
    delta_fixed: float = 0.1,
    grid: tuple = SWEEP_GRID,
    n_order: int = 40,
    slope_tol: float = 0.05,
    fit_tol: float = 0.02,
) -> tuple[CheckResult, RateFit, RateFit]:
    """Log-log blow-up rate fits: slope -1 in the vertical gap, -1/2 in the horizontal."""
    t0 = time.time()
    rows = []
    vals_h = []
    for dl in grid:
        cfg = CellConfig(eps=eps_fixed, delta=dl)
        t1 = time.time()
        sol = solve(BoundaryProblem(cfg=cfg, H=BackgroundField(b=1.0)), n_order=n_order)
        mg, _, _ = _max_gradient(sol, StripRegion.nh(), cfg)
        vals_h.append(mg)
        rows.append(_row("rate_nh", cfg, n_order, mg, np.nan, np.nan, True, time.time() - t1))
    fit_h = RateFit.from_sweep(grid, vals_h)
    vals_v = []
    for ep in grid:
        cfg = CellConfig(eps=ep, delta=delta_fixed)
        t1 = time.time()
        sol = solve(BoundaryProblem(cfg=cfg, H=BackgroundField(a=1.0)), n_order=n_order)
        mg, _, _ = _max_gradient(sol, StripRegion.nv(), cfg)
        vals_v.append(mg)
        rows.append(_row("rate_nv", cfg, n_order, mg, np.nan, np.nan, True, time.time() - t1))
    fit_v = RateFit.from_sweep(grid, vals_v)
    ok = (
        abs(fit_h.slope + 1.0) <= slope_tol
        and abs(fit_v.slope + 0.5) <= slope_tol
        and fit_h.residual < fit_tol
        and fit_v.residual < fit_tol
    )
    for r, fit, tgt in ((0, fit_h, -1.0), (1, fit_v, -0.5)):
        rows.append(
            {
                "check": "rate_slope_nh" if r == 0 else "rate_slope_nv",
                "eps": eps_fixed,
                "delta": delta_fixed,
                "N": n_order,
                "measured": fit.slope,
                "expected": tgt,
                "tol": slope_tol,
                "pass": abs(fit.slope - tgt) <= slope_tol,
                "seconds": 0.0,
            }
        )
    return (
        CheckResult(
            name="blowup_rates",
            claim_ref="generic blow-up rates 1/delta and 1/sqrt(eps)",
            measured={
                "slope_nh": fit_h.slope,
                "slope_nv": fit_v.slope,
                "fit_resid_nh": fit_h.residual,
                "fit_resid_nv": fit_v.residual,
            },
            tol={"slope": slope_tol, "fit_residual": fit_tol},
            passed=ok,
            seconds=time.time() - t0,
            rows=rows,
        ),
        fit_h,
        fit_v,
    )


def check_oracle(
    cfg: CellConfig | None = None,
    H: BackgroundField | None = None,
    rows_list: tuple = (10, 20, 50),
    n_order: int = 40,
    oracle_order: int = 44,
    rel_tol: float = 1e-3,
) -> CheckResult:
    """Periodic solver against the truncated-array reflection oracle.

    A finite array screens a background with vertical drop: its mid-section
    solves the periodic problem for gamma*H where gamma is measured from the
    oracle's own row constants against the exact period-shift formula (a
    1/M-slow end effect of the 2D array, not a solver property).  The check
    therefore compares oracle gradients against gamma times the periodic
    gradients, normalized by the peak gradient over the comparison points.
    """
    t0 = time.time()
    cfg = cfg or CellConfig(eps=0.1, delta=0.1)
    H = H or BackgroundField(b=1.0)
    sol = solve(BoundaryProblem(cfg=cfg, H=H), n_order=n_order)
    pts = np.vstack(
        [
            sample_region(StripRegion.nh(), cfg, 25, margin=0.15),
            sample_region(StripRegion.nv(), cfg, 25, margin=0.15),
        ]
    )
    gp = sol.gradient(pts)
    dH = shift_constant(H, cfg)
    errs, gammas, out_rows = [], [], []
    for rows in rows_list:
        t1 = time.time()
        orc = solve_truncated_oracle(cfg, H, rows=rows, n_order=oracle_order)
        half = len(orc.centers) // 2
        cR = orc.constants[half:]
        gamma = float((cR[rows + 1] - cR[rows - 1]) / (2.0 * dH)) if dH != 0.0 else 1.0
        go = orc.gradient(pts)
        ref = gamma * gp
        err = float(np.max(np.hypot(*(go - ref).T)) / np.max(np.hypot(*ref.T)))
        errs.append(err)
        gammas.append(gamma)
        out_rows.append(_row(f"oracle_M{rows}", cfg, oracle_order, err, 0.0, rel_tol, err <= rel_tol or rows != rows_list[-1], time.time() - t1))
    monotone = all(errs[i + 1] < errs[i] for i in range(len(errs) - 1))
    ok = monotone and errs[-1] <= rel_tol
    return CheckResult(
        name="oracle_equivalence",
        claim_ref="periodic solver vs truncated-array brute force",
        measured={"errors": errs, "gammas": gammas, "monotone": monotone},
        tol={"rel_final": rel_tol, "monotone": 1.0},
        passed=ok,
        seconds=time.time() - t0,
        rows=out_rows,
    )


def check_max_principles(
    cfg: CellConfig,
    n_order: int = 40,
    n_samples: int = 10_000,
    even_tol: float = 1e-10,
    alpha_eps_list: tuple = SWEEP_GRID,
) -> CheckResult:
    """Sampled maximum principle, evenness of the pair potential, alpha bracket."""
    t0 = time.time()
    sol_phi = solve_phi(cfg, n_order=n_order)
    c0 = sol_phi.c0
    rng = np.random.default_rng(20240901)
    pts = np.empty((0, 2))
    while len(pts) < n_samples:
        cand = np.column_stack(
            [rng.uniform(1e-3, 9.0, 2 * n_samples), rng.uniform(-1.0 - 0.499 * cfg.delta, 1.0 + 0.499 * cfg.delta, 2 * n_samples)]
        )
        cand = cand[np.hypot(cand[:, 0] - cfg.x_right, cand[:, 1]) > 1.0 + 1e-9]
        pts = np.vstack([pts, cand])[:n_samples]
    ratio = sol_phi.value(pts) / c0
    # the strict open-region inequality is judged at the achieved solver
    # resolution: beyond the disk the true margin 1 - phi/c0 shrinks to the
    # order of the far-field plateau drop, which sits below any attainable
    # boundary residual
    eta = 10.0 * max(sol_phi.residual, 1e-12) / abs(c0)
    violations = int(np.sum((ratio <= -eta) | (ratio >= 1.0 + eta)))
    even_err = float(np.max(np.abs(sol_phi.value(pts) - sol_phi.value(pts * [1.0, -1.0]))))
    rows = [
        _row("maxprin_ratio", cfg, n_order, float(violations), 0.0, eta, violations == 0, 0.0),
        _row("phi_evenness", cfg, n_order, even_err, 0.0, even_tol, even_err <= even_tol, 0.0),
    ]
    alphas = []
    for ep in alpha_eps_list:
        cfg_a = CellConfig(eps=ep, delta=cfg.delta)
        t1 = time.time()
        one_minus = 1.0 - alpha_coefficient(cfg_a, solve_phi(cfg_a, n_order=n_order))
        alphas.append(one_minus / np.sqrt(ep))
        rows.append(_row("alpha_gap", cfg_a, n_order, one_minus / np.sqrt(ep), np.nan, STABILITY_FACTOR, one_minus > 0, time.time() - t1))
    alphas = np.array(alphas)
    k_alpha = float(alphas.max())
    alpha_ok = bool(np.all(alphas > 0) and alphas.max() / alphas.min() <= STABILITY_FACTOR)
    ok = violations == 0 and even_err <= even_tol and alpha_ok
    return CheckResult(
        name="maximum_principles",
        claim_ref="0 < phi/c0 < 1, y-evenness, 0 < 1 - alpha <= C sqrt(eps)",
        measured={
            "violations": violations,
            "ratio_min": float(ratio.min()),
            "ratio_max": float(ratio.max()),
            "even_error": even_err,
            "alpha_ratios": alphas.tolist(),
            "K_alpha": k_alpha,
        },
        tol={"violations": 0, "ratio_eta": eta, "even": even_tol, "alpha_factor": STABILITY_FACTOR},
        passed=ok,
        seconds=time.time() - t0,
        rows=rows,
    )


def check_decay(cfg: CellConfig, H: BackgroundField, n_order: int = 40, slope_slack: float = 0.05) -> CheckResult:
    """Exponential far-field decay rate of grad(u - H) on x in [4, 8]."""
    t0 = time.time()
    sol = solve(BoundaryProblem(cfg=cfg, H=H), n_order=n_order)
    xs = np.linspace(4.0, 8.0, 9)
    ys = np.linspace(-0.8, 0.8, 5)
    mags = []
    for x in xs:
        pts = np.column_stack([np.full_like(ys, x), ys])
        g = sol.gradient(pts) - H.gradient(pts)
        mags.append(np.max(np.hypot(g[:, 0], g[:, 1])))
    slope, _, rms = affine_fit(xs, np.log(np.asarray(mags)))
    bound = -np.pi / cfg.period + slope_slack
    ok = slope <= bound
    sec = time.time() - t0
    return CheckResult(
        name="farfield_decay",
        claim_ref="exponential half-strip decay rate",
        measured={"slope": float(slope), "bound": float(bound), "fit_rms": rms},
        tol={"slope_bound": float(bound)},
        passed=ok,
        seconds=sec,
        rows=[_row("decay", cfg, n_order, float(slope), float(-np.pi / cfg.period), slope_slack, ok, sec)],
    )


def check_corollary14(
    cfg: CellConfig,
    H: BackgroundField,
    n_order: int = 40,
    bound_factor: float = 8.0,
) -> CheckResult:
    """Single-column variant: same vertical-gap asymptote and remainder bound."""
    t0 = time.time()
    sol = solve(BoundaryProblem(cfg=cfg, H=H, variant="single-row"), n_order=n_order)
    coeff = lambda_coefficient(H)
    model = AsymptoteModel(region="nh", coefficient=coeff, cfg=cfg)
    max_grad, grid, g = _max_gradient(sol, StripRegion.nh(), cfg)
    main = asymptote_gradient(model, grid, check_region=False)
    resid = float(np.max(np.hypot(*(g - main).T)))
    hnorm = H.sup_norm(cfg)
    ok = resid <= bound_factor * hnorm
    sec = time.time() - t0
    return CheckResult(
        name="corollary14_single_row",
        claim_ref="single-column vertical-gap asymptote",
        measured={"coefficient": coeff, "max_grad": max_grad, "max_resid": resid, "H_norm": hnorm},
        tol={"resid_bound": bound_factor * hnorm},
        passed=ok,
        seconds=sec,
        rows=[_row("cor14", cfg, n_order, resid, np.nan, bound_factor * hnorm, ok, sec)],
    )


def check_hygiene(cfg: CellConfig, H: BackgroundField, n_order: int = 40, variant: str = "two-row") -> CheckResult:
    """Numerical hygiene of one solved configuration.

    Harmonicity (5-point Laplacian), flux quadrature, gradient periodicity,
    and analytic-vs-finite-difference gradients, each at its stated tolerance.
    """
    t0 = time.time()
    problem = BoundaryProblem(cfg=cfg, H=H, variant=variant)
    sol = solve(problem, n_order=n_order)
    rng = np.random.default_rng(7)
    pts = []
    while len(pts) < 100:
        cand = np.column_stack([rng.uniform(-3.0, 3.0, 400), rng.uniform(-3.0, 3.0, 400)])
        from .geometry import disk_clearances

        cand = cand[disk_clearances(cand, cfg) > 0.05]
        pts.extend(cand.tolist())
    pts = np.array(pts[:100])

    def scalar(p):
        return sol.value(np.asarray(p, dtype=float)[None, :])[0]

    from .geometry import disk_clearances

    clear = disk_clearances(pts, cfg)
    grads = sol.gradient(pts)
    gmags = np.hypot(grads[:, 0], grads[:, 1])
    gscale = max(float(np.median(gmags)), 1e-6)
    lap_rel, grad_rel = 0.0, 0.0
    for p, c, g, gm in zip(pts, clear, grads, gmags):
        h = c / 300.0
        lap = abs(fd_laplacian(scalar, p, h))
        lap_rel = max(lap_rel, lap * h / max(gm, 1e-3 * gscale))
        hg = c * 3e-4
        fd = fd_gradient(scalar, p, hg)
        grad_rel = max(grad_rel, float(np.linalg.norm(fd - g)) / max(gm, 1e-3 * gscale))

    flux_err = 0.0
    sides = ("L", "R") if variant == "two-row" else ("R",)
    for side, q in zip(("L", "R"), problem.flux):
        if side in sides:
            flux_err = max(flux_err, abs(disk_flux(sol, side) - q))

    per_pts = pts[:20]
    gper = sol.gradient(per_pts + [0.0, cfg.period]) - sol.gradient(per_pts)
    per_err = float(np.max(np.abs(gper)) / max(gscale, 1.0))

    tols = {"laplacian": 1e-6, "gradient_fd": 1e-7, "flux": 1e-8, "periodicity": 1e-12}
    ok = lap_rel < tols["laplacian"] and grad_rel < tols["gradient_fd"] and flux_err < tols["flux"] and per_err < tols["periodicity"]
    return CheckResult(
        name=f"hygiene_{variant}",
        claim_ref="harmonicity, flux, periodicity, gradient invariants",
        measured={
            "laplacian_rel": lap_rel,
            "gradient_fd_rel": grad_rel,
            "flux_error": flux_err,
            "periodicity_rel": per_err,
        },
        tol=tols,
        passed=bool(ok),
        seconds=time.time() - t0,
        rows=[_row("hygiene", cfg, n_order, max(lap_rel, grad_rel), 0.0, 1e-6, ok, time.time() - t0)],
    )


# ---------------------------------------------------------------------------
# suite driver and report emission
# ---------------------------------------------------------------------------

SUITE_CHECKS = (
    "prop21",
    "prop22",
    "identity",
    "thm11_nh",
    "thm11_nv",
    "rates",
    "decay",
    "max_principles",
    "oracle",
    "corollary14",
    "hygiene",
)


def run_suite(
    cfg: CellConfig | None = None,
    checks: tuple = SUITE_CHECKS,
    eps_grid: tuple = SWEEP_GRID,
    delta_grid: tuple = SWEEP_GRID,
) -> list[CheckResult]:
    """Run the named checks at the base configuration and default sweeps."""
    cfg = cfg or CellConfig(eps=0.1, delta=0.1)
    Hx, Hy = BackgroundField(a=1.0), BackgroundField(b=1.0)
    results: list[CheckResult] = []
    if "prop21" in checks:
        results.append(check_prop21(cfg, Hy))
    if "prop22" in checks:
        results.append(check_prop22_sweep(delta=cfg.delta, eps_list=eps_grid))
    if "identity" in checks:
        for H in (Hx, Hy, BackgroundField(a=1.0, b=2.0)):
            results.append(check_identity(cfg, H))
    if "thm11_nh" in checks:
        results.append(check_thm11(cfg, Hy, StripRegion.nh()))
    if "thm11_nv" in checks:
        results.append(check_thm11(cfg, Hx, StripRegion.nv()))
    if "rates" in checks:
        results.append(check_rates(eps_fixed=cfg.eps, delta_fixed=cfg.delta, grid=delta_grid)[0])
    if "decay" in checks:
        results.append(check_decay(cfg, Hy))
    if "max_principles" in checks:
        results.append(check_max_principles(cfg, alpha_eps_list=eps_grid))
    if "oracle" in checks:
        results.append(check_oracle(cfg, Hy))
    if "corollary14" in checks:
        results.append(check_corollary14(cfg, Hy))
    if "hygiene" in checks:
        results.append(check_hygiene(cfg, Hy))
        results.append(check_hygiene(cfg, Hx))
    return results


CSV_COLUMNS = ("check", "eps", "delta", "N", "measured", "expected", "tol", "pass", "seconds")


def write_csv(results: list[CheckResult], path) -> None:
    """One CSV row per sweep point per check, fixed column order."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for res in results:
            for row in res.rows:
                writer.writerow({k: _fmt(row.get(k)) for k in CSV_COLUMNS})


def _fmt(val):
    if isinstance(val, float):
        return format(val, ".17g")
    return val


def summary_dict(results: list[CheckResult]) -> dict:
    return {
        "all_passed": all(r.passed for r in results),
        "checks": {
            r.name: {
                "claim_ref": r.claim_ref,
                "passed": r.passed,
                "measured": r.measured,
                "tol": r.tol,
                "seconds": round(r.seconds, 3),
            }
            for r in results
        },
    }


def write_summary(results: list[CheckResult], path) -> None:
    with open(path, "w") as fh:
        json.dump(summary_dict(results), fh, indent=1, default=float)
