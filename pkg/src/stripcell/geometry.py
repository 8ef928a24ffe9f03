"""Disk lattice geometry: the periodic strip, the narrow gap regions, sampling.

The cell holds two columns of unit disks.  Column R is centered on
x = 1 + eps/2 and column L on x = -1 - eps/2; row n sits at height
n*(2 + delta).  Horizontally adjacent disks are eps apart, vertically
adjacent ones delta apart, and everything repeats with period 2 + delta
in y.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RADIUS = 1.0

#: boundary classification tolerance: |circle equation| below this is decided
#: by its sign, an exact zero counts as boundary
BOUNDARY_TIE = 0.0


class RegionSamplingError(ValueError):
    """Raised when a region cannot be sampled at the requested resolution."""


@dataclass(frozen=True)
class CellConfig:
    """Geometry of one periodic cell.

    eps is the horizontal gap between the two columns, delta the vertical gap
    within a column; the lattice period 2 + delta is derived.  ``m`` is the
    half-width of the bounded window Omega_m used for norms.
    """

    eps: float
    delta: float
    m: int = 4

    def __post_init__(self):
        if not (0.0 < self.eps < 1.0):
            raise ValueError(f"eps must be in (0, 1), got {self.eps}")
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")
        if self.m < 3:
            raise ValueError(f"m must be >= 3, got {self.m}")

    @property
    def period(self) -> float:
        return 2.0 + self.delta

    @property
    def x_right(self) -> float:
        return 1.0 + 0.5 * self.eps

    @property
    def x_left(self) -> float:
        return -1.0 - 0.5 * self.eps

    @classmethod
    def from_text(cls, text: str) -> "CellConfig":
        """Parse a plain key=value config (keys: eps, delta, m).

        Decimal parsing only; '#' starts a comment.  Unknown keys are errors.
        """
        values: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in ("eps", "delta", "m"):
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            if key in values:
                raise ValueError(f"line {lineno}: duplicate key {key!r}")
            values[key] = val.strip()
        for required in ("eps", "delta"):
            if required not in values:
                raise ValueError(f"missing required key {required!r}")
        return cls(
            eps=float(values["eps"]),
            delta=float(values["delta"]),
            m=int(values.get("m", "4")),
        )

    def to_dict(self) -> dict:
        return {"eps": self.eps, "delta": self.delta, "m": self.m}


@dataclass(frozen=True)
class DiskId:
    """One disk of the lattice: column side 'L' or 'R', integer row."""

    side: str
    row: int = 0

    def __post_init__(self):
        if self.side not in ("L", "R"):
            raise ValueError(f"side must be 'L' or 'R', got {self.side!r}")


def disk_center(disk: DiskId, cfg: CellConfig) -> np.ndarray:
    """Exact center of a disk as an (x, y) array."""
    x = cfg.x_right if disk.side == "R" else cfg.x_left
    return np.array([x, disk.row * cfg.period])


@dataclass(frozen=True)
class StripRegion:
    """One of the named regions: Omega, Omega_m, N_v or N_h.

    N_v is the lens between the two columns at row 0 (horizontal gap of
    width eps); N_h is the lens between rows 0 and 1 of column R (vertical
    gap of width delta).
    """

    kind: str
    m: int | None = None

    def __post_init__(self):
        if self.kind not in ("omega", "omega_m", "nv", "nh"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.kind == "omega_m" and (self.m is None or self.m < 3):
            raise ValueError("omega_m requires m >= 3")

    @classmethod
    def omega(cls) -> "StripRegion":
        return cls("omega")

    @classmethod
    def omega_m(cls, m: int = 4) -> "StripRegion":
        return cls("omega_m", m=m)

    @classmethod
    def nv(cls) -> "StripRegion":
        return cls("nv")

    @classmethod
    def nh(cls) -> "StripRegion":
        return cls("nh")


def contains(region: StripRegion, p, cfg: CellConfig) -> bool:
    """Exact set membership for a single point."""
    return bool(contains_many(region, np.asarray(p, dtype=float).reshape(1, 2), cfg)[0])


def contains_many(region: StripRegion, pts: np.ndarray, cfg: CellConfig) -> np.ndarray:
    """Vectorized membership test for an (n, 2) array of points."""
    pts = np.asarray(pts, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    half = 1.0 + 0.5 * cfg.delta
    if region.kind == "omega":
        return np.abs(y) < half
    if region.kind == "omega_m":
        return (np.abs(y) < half) & (np.abs(x) < region.m)
    root3_half = np.sqrt(3.0) / 2.0
    if region.kind == "nv":
        ok = np.abs(y) < root3_half
        reach = np.zeros_like(y)
        reach[ok] = 1.0 + 0.5 * cfg.eps - np.sqrt(1.0 - y[ok] ** 2)
        return ok & (np.abs(x) < reach)
    # nh: same lens rotated into the vertical gap of column R
    dx = x - cfg.x_right
    dy = y - (1.0 + 0.5 * cfg.delta)
    ok = np.abs(dx) < root3_half
    reach = np.zeros_like(dx)
    reach[ok] = 1.0 + 0.5 * cfg.delta - np.sqrt(1.0 - dx[ok] ** 2)
    return ok & (np.abs(dy) < reach)


def reduce_to_cell(p, cfg: CellConfig) -> tuple[np.ndarray, int]:
    """Shift a point by whole lattice periods into the reference cell.

    Returns the reduced point (|y| <= period/2) and the row shift applied.
    """
    p = np.asarray(p, dtype=float)
    n = int(np.round(p[1] / cfg.period))
    return np.array([p[0], p[1] - n * cfg.period]), n


def disk_clearances(pts: np.ndarray, cfg: CellConfig) -> np.ndarray:
    """Signed distance from each point to the nearest disk boundary.

    Positive outside every disk.  Only the two row-0 disks and their lattice
    images matter once y has been reduced into the reference cell.
    """
    pts = np.asarray(pts, dtype=float)
    x = pts[:, 0]
    y_red = pts[:, 1] - np.round(pts[:, 1] / cfg.period) * cfg.period
    out = np.full(len(pts), np.inf)
    for cx in (cfg.x_left, cfg.x_right):
        for cy in (0.0, -cfg.period, cfg.period):
            d = np.hypot(x - cx, y_red - cy) - RADIUS
            out = np.minimum(out, d)
    return out


def in_any_disk(p, cfg: CellConfig) -> bool:
    """True when the point is strictly inside some disk of the lattice.

    Points exactly on a circle (circle equation equal to zero) count as
    boundary, not interior.
    """
    pts = np.asarray(p, dtype=float).reshape(1, 2)
    return bool(disk_clearances(pts, cfg)[0] < -BOUNDARY_TIE)


def local_gap_width(region: StripRegion, pts: np.ndarray, cfg: CellConfig) -> np.ndarray:
    """Local width of the narrow region at each point.

    For N_v this is the full horizontal width of the lens at that height, for
    N_h the vertical analog; for the strip windows the constant min(eps, delta)
    is used.
    """
    pts = np.asarray(pts, dtype=float)
    if region.kind == "nv":
        y = np.clip(np.abs(pts[:, 1]), 0.0, 1.0)
        return 2.0 * (1.0 + 0.5 * cfg.eps - np.sqrt(np.maximum(1.0 - y**2, 0.0)))
    if region.kind == "nh":
        dx = np.clip(np.abs(pts[:, 0] - cfg.x_right), 0.0, 1.0)
        return 2.0 * (1.0 + 0.5 * cfg.delta - np.sqrt(np.maximum(1.0 - dx**2, 0.0)))
    return np.full(len(pts), min(cfg.eps, cfg.delta))


def _bounding_box(region: StripRegion, cfg: CellConfig) -> tuple[float, float, float, float]:
    half = 1.0 + 0.5 * cfg.delta
    r3 = np.sqrt(3.0) / 2.0
    if region.kind == "omega":
        raise RegionSamplingError("Omega is unbounded in x; sample Omega_m instead")
    if region.kind == "omega_m":
        return -float(region.m), float(region.m), -half, half
    if region.kind == "nv":
        return -(0.5 + 0.5 * cfg.eps), 0.5 + 0.5 * cfg.eps, -r3, r3
    xc = cfg.x_right
    yc = 1.0 + 0.5 * cfg.delta
    return xc - r3, xc + r3, yc - (0.5 + 0.5 * cfg.delta), yc + (0.5 + 0.5 * cfg.delta)


def sample_region(
    region: StripRegion,
    cfg: CellConfig,
    n_points: int,
    margin: float = 0.0,
) -> np.ndarray:
    """Deterministic tensor-grid sample of a region.

    Returns exactly ``n_points`` points, all inside the region and at distance
    at least ``margin * local_gap_width`` outside every closed disk.  The grid
    is refined a bounded number of times; failure to collect enough admissible
    points raises :class:`RegionSamplingError` rather than silently returning
    fewer.
    """
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    x0, x1, y0, y1 = _bounding_box(region, cfg)
    aspect = max((x1 - x0) / max(y1 - y0, 1e-300), 1e-6)
    target = max(4 * n_points, 64)
    for _ in range(9):
        nx = max(int(np.ceil(np.sqrt(target * aspect))), 2)
        ny = max(int(np.ceil(target / nx)), 2)
        xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
        ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
        grid = np.column_stack([np.repeat(xs, ny), np.tile(ys, nx)])
        keep = contains_many(region, grid, cfg)
        pts = grid[keep]
        if len(pts):
            clear = disk_clearances(pts, cfg)
            widths = local_gap_width(region, pts, cfg)
            pts = pts[clear > margin * widths]
        if len(pts) >= n_points:
            idx = np.unique(np.round(np.linspace(0, len(pts) - 1, n_points)).astype(int))
            # rounding can merge neighbors; pad from the front deterministically
            if len(idx) < n_points:
                extra = [i for i in range(len(pts)) if i not in set(idx)]
                idx = np.sort(np.concatenate([idx, extra[: n_points - len(idx)]]))
            return pts[idx]
        target *= 4
    raise RegionSamplingError(
        f"could not collect {n_points} admissible points in {region.kind} "
        f"(margin={margin}); refine limit reached"
    )


def random_region_points(
    region: StripRegion,
    cfg: CellConfig,
    n_points: int,
    seed: int,
    margin: float = 0.0,
) -> np.ndarray:
    """Seeded rejection sampler used by the property tests."""
    rng = np.random.default_rng(seed)
    x0, x1, y0, y1 = _bounding_box(region, cfg)
    out = []
    for _ in range(200):
        cand = np.column_stack(
            [rng.uniform(x0, x1, 4 * n_points), rng.uniform(y0, y1, 4 * n_points)]
        )
        keep = contains_many(region, cand, cfg)
        cand = cand[keep]
        if len(cand):
            clear = disk_clearances(cand, cfg)
            widths = local_gap_width(region, cand, cfg)
            cand = cand[clear > margin * widths]
        out.extend(cand.tolist())
        if len(out) >= n_points:
            return np.array(out[:n_points])
    raise RegionSamplingError(f"rejection sampling failed for {region.kind}")
