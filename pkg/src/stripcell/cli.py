"""Command-line front end: single solves, sweeps, and the verification suite.

All outputs are plain files (solution JSON, check CSV, JSON summary) written
atomically, with a manifest recording the resolved run specification and a
hash of it for reproducibility.  Exit codes: 0 on success, 1 when an enabled
check or residual gate fails, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .basis import BackgroundField, Mode
from .geometry import CellConfig
from .solver import BoundaryProblem, solve
from . import verify as verify_mod

USAGE_ERROR = 2
CHECK_FAILURE = 1


@dataclass
class RunSpec:
    """Fully resolved run description; spec + code version determine outputs."""

    subcommand: str
    eps: float = 0.1
    delta: float = 0.1
    m: int = 4
    field_spec: str = "x"
    modes: list = field(default_factory=list)
    n_order: int = 40
    n_colloc: int | None = None
    rows: int = 20
    suite: list = field(default_factory=lambda: list(verify_mod.SUITE_CHECKS))
    eps_grid: list = field(default_factory=lambda: list(verify_mod.SWEEP_GRID))
    delta_grid: list = field(default_factory=lambda: list(verify_mod.SWEEP_GRID))
    out: str = "."
    tol_residual: float = 1e-8
    claim: str = "rates"

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_manifest(spec: RunSpec, out_dir: str) -> None:
    import scipy

    from . import __version__

    manifest = {
        "spec": spec.to_dict(),
        "config_sha256": spec.config_hash(),
        "versions": {
            "stripcell": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }
    _atomic_write(os.path.join(out_dir, "manifest.json"), json.dumps(manifest, indent=1))


def _parse_mode(text: str) -> Mode:
    parts = dict(kv.split("=", 1) for kv in text.split(","))
    return Mode(
        j=int(parts["j"]),
        c_plus=float(parts.get("cplus", "0")),
        c_minus=float(parts.get("cminus", "0")),
        phase=float(parts.get("phase", "0")),
    )


def _load_config_file(path: str, args: argparse.Namespace) -> None:
    """Apply key=value lines from a config file as flag defaults."""
    with open(path) as fh:
        text = fh.read()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        val = val.strip()
        if key in ("eps", "delta", "tol_residual"):
            setattr(args, key, float(val))
        elif key in ("m", "n_order", "n_colloc", "rows"):
            setattr(args, key, int(val))
        elif key in ("H", "field"):
            args.H = val
        elif key in ("out", "suite", "claim"):
            setattr(args, key, val)
        elif key in ("eps_grid", "delta_grid"):
            setattr(args, key, val)
        else:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")


def _grid(text: str | None) -> list:
    if text in (None, "default"):
        return list(verify_mod.SWEEP_GRID)
    return [float(v) for v in text.split(",") if v.strip()]


def _spec_from_args(args: argparse.Namespace) -> RunSpec:
    spec = RunSpec(subcommand=args.cmd)
    for key in ("eps", "delta", "m", "n_order", "n_colloc", "rows", "out", "tol_residual", "claim"):
        if hasattr(args, key) and getattr(args, key) is not None:
            setattr(spec, key, getattr(args, key))
    if getattr(args, "H", None):
        spec.field_spec = args.H
    if getattr(args, "mode", None):
        spec.modes = list(args.mode)
    if getattr(args, "suite", None):
        spec.suite = (
            list(verify_mod.SUITE_CHECKS) if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
        )
    if hasattr(args, "eps_grid"):
        spec.eps_grid = _grid(args.eps_grid)
    if hasattr(args, "delta_grid"):
        spec.delta_grid = _grid(args.delta_grid)
    return spec


def _background(spec: RunSpec, cfg: CellConfig) -> BackgroundField:
    modes = tuple(_parse_mode(m) for m in spec.modes)
    period = cfg.period if modes else None
    base = BackgroundField.parse(spec.field_spec)
    return BackgroundField(a=base.a, b=base.b, const=base.const, period=period, modes=modes)


def cmd_solve(spec: RunSpec) -> int:
    cfg = CellConfig(eps=spec.eps, delta=spec.delta, m=spec.m)
    H = _background(spec, cfg)
    sol = solve(BoundaryProblem(cfg=cfg, H=H), n_order=spec.n_order, n_colloc=spec.n_colloc)
    out_dir = spec.out
    os.makedirs(out_dir, exist_ok=True)
    _atomic_write(os.path.join(out_dir, "solution.json"), json.dumps(sol.to_json_dict(), indent=1))
    _write_manifest(spec, out_dir)
    print(
        f"solved eps={cfg.eps} delta={cfg.delta} H={spec.field_spec!r}: "
        f"c_L={sol.c_L:.12g} c_R={sol.c_R:.12g} residual={sol.residual:.3e} cond={sol.cond:.3e}"
    )
    if sol.residual > spec.tol_residual:
        print(f"residual gate FAILED: {sol.residual:.3e} > {spec.tol_residual:.1e}", file=sys.stderr)
        return CHECK_FAILURE
    return 0


def cmd_verify(spec: RunSpec) -> int:
    cfg = CellConfig(eps=spec.eps, delta=spec.delta, m=spec.m)
    results = verify_mod.run_suite(
        cfg=cfg,
        checks=tuple(spec.suite),
        eps_grid=tuple(spec.eps_grid),
        delta_grid=tuple(spec.delta_grid),
    )
    os.makedirs(spec.out, exist_ok=True)
    csv_path = os.path.join(spec.out, "report.csv")
    verify_mod.write_csv(results, csv_path)
    verify_mod.write_summary(results, os.path.join(spec.out, "summary.json"))
    _write_manifest(spec, spec.out)
    for res in results:
        print(res.summary())
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed; report at {csv_path}")
    return 0 if n_fail == 0 else CHECK_FAILURE


def cmd_sweep(spec: RunSpec) -> int:
    os.makedirs(spec.out, exist_ok=True)
    if spec.claim == "rates":
        result, fit_h, fit_v = verify_mod.check_rates(
            eps_fixed=spec.eps, delta_fixed=spec.delta, grid=tuple(spec.delta_grid)
        )
        print(f"N_h: slope={fit_h.slope:+.4f} (target -1.00)  fit rms={fit_h.residual:.4f}")
        print(f"N_v: slope={fit_v.slope:+.4f} (target -0.50)  fit rms={fit_v.residual:.4f}")
    elif spec.claim == "prop22":
        result = verify_mod.check_prop22_sweep(delta=spec.delta, eps_list=tuple(spec.eps_grid))
        print("ratios:", ", ".join(f"{r:.5f}" for r in result.measured["ratios"]))
    else:
        print(f"unknown claim {spec.claim!r}", file=sys.stderr)
        return USAGE_ERROR
    verify_mod.write_csv([result], os.path.join(spec.out, f"sweep_{spec.claim}.csv"))
    verify_mod.write_summary([result], os.path.join(spec.out, f"sweep_{spec.claim}.json"))
    _write_manifest(spec, spec.out)
    print(result.summary())
    return 0 if result.passed else CHECK_FAILURE


def cmd_report(spec: RunSpec) -> int:
    path = os.path.join(spec.out, "summary.json")
    if not os.path.exists(path):
        print(f"no summary.json under {spec.out!r}", file=sys.stderr)
        return USAGE_ERROR
    with open(path) as fh:
        summary = json.load(fh)
    width = max(len(k) for k in summary["checks"]) + 2
    for name, entry in summary["checks"].items():
        flag = "PASS" if entry["passed"] else "FAIL"
        print(f"{name:<{width}} {flag}  ({entry['claim_ref']})  [{entry['seconds']}s]")
    print("overall:", "PASS" if summary["all_passed"] else "FAIL")
    return 0 if summary["all_passed"] else CHECK_FAILURE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stripcell", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file mirroring the flags")
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--m", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")

    p_solve = sub.add_parser("solve", help="solve one configuration")
    common(p_solve)
    p_solve.add_argument("--H", default="x", help="background field, e.g. 'x', 'y', 'x+2y'")
    p_solve.add_argument("--mode", action="append", help="j=..,cplus=..,cminus=..,phase=..")
    p_solve.add_argument("--N", dest="n_order", type=int, default=None, help="multipole truncation")
    p_solve.add_argument("--M", dest="n_colloc", type=int, default=None, help="collocation points per circle")
    p_solve.add_argument("--tol-residual", dest="tol_residual", type=float, default=None)

    p_verify = sub.add_parser("verify", help="run the verification suite")
    common(p_verify)
    p_verify.add_argument("--suite", default="all", help="'all' or comma list of checks")
    p_verify.add_argument("--eps-grid", dest="eps_grid", default=None, help="'default' or comma list")
    p_verify.add_argument("--delta-grid", dest="delta_grid", default=None, help="'default' or comma list")

    p_sweep = sub.add_parser("sweep", help="run one sweep claim")
    common(p_sweep)
    p_sweep.add_argument("--claim", default="rates", choices=("rates", "prop22"))
    p_sweep.add_argument("--eps-grid", dest="eps_grid", default=None)
    p_sweep.add_argument("--delta-grid", dest="delta_grid", default=None)

    p_report = sub.add_parser("report", help="print a saved summary as a table")
    p_report.add_argument("--out", default=".", help="directory holding summary.json")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if getattr(args, "config", None):
            _load_config_file(args.config, args)
        spec = _spec_from_args(args)
        spec.out = spec.out or "."
        if args.cmd == "solve":
            return cmd_solve(spec)
        if args.cmd == "verify":
            return cmd_verify(spec)
        if args.cmd == "sweep":
            return cmd_sweep(spec)
        return cmd_report(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
