"""Periodic two-column conductor cells: solver, closed-form asymptotes, checks."""

__version__ = "0.1.0"

from .basis import BackgroundField, BasisElement, Mode, eval_background, freespace_multipole, periodized_multipole
from .geometry import CellConfig, DiskId, RegionSamplingError, StripRegion, contains, disk_center, sample_region
from .asymptotics import (
    AsymptoteModel,
    ImagePair,
    alpha_coefficient,
    alpha_h,
    asymptote_gradient,
    beta_v,
    image_point,
    lambda_coefficient,
    mu_extract,
    phi_h,
    phi_n,
    phi_v,
    S_term,
    tilde_phi,
)
from .solver import (
    BoundaryProblem,
    CellSolution,
    SolverConvergenceError,
    TruncatedArraySolution,
    disk_flux,
    integral_identity,
    shift_constant,
    solve,
    solve_phi,
    solve_truncated_oracle,
)
from .verify import CheckResult, RateFit, run_suite

__all__ = [
    "AsymptoteModel",
    "BackgroundField",
    "BasisElement",
    "BoundaryProblem",
    "CellConfig",
    "CellSolution",
    "CheckResult",
    "DiskId",
    "ImagePair",
    "Mode",
    "RateFit",
    "RegionSamplingError",
    "SolverConvergenceError",
    "StripRegion",
    "S_term",
    "TruncatedArraySolution",
    "alpha_coefficient",
    "alpha_h",
    "asymptote_gradient",
    "beta_v",
    "contains",
    "disk_center",
    "disk_flux",
    "eval_background",
    "freespace_multipole",
    "image_point",
    "integral_identity",
    "lambda_coefficient",
    "mu_extract",
    "periodized_multipole",
    "phi_h",
    "phi_n",
    "phi_v",
    "run_suite",
    "sample_region",
    "shift_constant",
    "solve",
    "solve_phi",
    "solve_truncated_oracle",
    "tilde_phi",
]
