"""Closed-form harmonic building blocks.

Free-space multipoles Re/Im (z - z0)^(-m), their y-periodized counterparts
obtained from log sinh(pi (z - z0)/L) and its source derivatives, and
background fields H with lattice-periodic gradient.

The periodized order-m element equals the symmetric lattice sum
sum_n (z - z0 - i n L)^(-m) exactly for m >= 1 and up to an additive constant
for the m = 0 monopole.  Internally the sums are evaluated in closed form via
polynomials in coth and csch^2, which costs O(1) per point and is
exponentially accurate, so direct image summation survives only as a test
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .geometry import CellConfig, DiskId, disk_center
from .numerics import coth_csch2, logabs_sinh

#: largest supported multipole order for the coth-polynomial recurrence
MAX_ORDER = 64

_COS, _SIN = "cos", "sin"


class SourceEvaluationError(ValueError):
    """Raised when a basis element is evaluated on top of its source."""


# ---------------------------------------------------------------------------
# background fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mode:
    """One harmonic mode c_plus*e^{+kx}cos(ky+phase) + c_minus*e^{-kx}cos(ky+phase).

    The wavenumber k = 2*pi*j/period is lattice-commensurate by construction,
    which is what keeps the gradient of H exactly periodic.
    """

    j: int
    c_plus: float = 0.0
    c_minus: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.j < 1:
            raise ValueError("mode index j must be a positive integer")


@dataclass(frozen=True)
class BackgroundField:
    """Harmonic H = const + a*x + b*y + Fourier modes, gradient periodic in y."""

    a: float = 0.0
    b: float = 0.0
    const: float = 0.0
    period: float | None = None
    modes: tuple[Mode, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.modes and self.period is None:
            raise ValueError("modes require an explicit lattice period")

    def value(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        x, y = pts[:, 0], pts[:, 1]
        out = self.const + self.a * x + self.b * y
        for md in self.modes:
            k = 2.0 * np.pi * md.j / self.period
            c = np.cos(k * y + md.phase)
            out = out + (md.c_plus * np.exp(k * x) + md.c_minus * np.exp(-k * x)) * c
        return out

    def gradient(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        x, y = pts[:, 0], pts[:, 1]
        gx = np.full_like(x, self.a)
        gy = np.full_like(y, self.b)
        for md in self.modes:
            k = 2.0 * np.pi * md.j / self.period
            ep, em = np.exp(k * x), np.exp(-k * x)
            c = np.cos(k * y + md.phase)
            s = np.sin(k * y + md.phase)
            gx += k * (md.c_plus * ep - md.c_minus * em) * c
            gy += -k * (md.c_plus * ep + md.c_minus * em) * s
        return np.column_stack([gx, gy])

    def analytic(self, z: np.ndarray) -> np.ndarray:
        """Complex potential F with H = Re F (used by the reflection oracle)."""
        z = np.asarray(z, dtype=complex)
        out = self.const + (self.a - 1j * self.b) * z
        for md in self.modes:
            k = 2.0 * np.pi * md.j / self.period
            out = out + md.c_plus * np.exp(1j * md.phase) * np.exp(k * z)
            out = out + md.c_minus * np.exp(-1j * md.phase) * np.exp(-k * z)
        return out

    def analytic_taylor(self, z0: complex, n_terms: int) -> np.ndarray:
        """Taylor coefficients of the complex potential around z0 (orders 0..n-1)."""
        coeffs = np.zeros(n_terms, dtype=complex)
        coeffs[0] = self.const + (self.a - 1j * self.b) * z0
        if n_terms > 1:
            coeffs[1] = self.a - 1j * self.b
        fact = 1.0
        for k in range(n_terms):
            if k > 0:
                fact *= k
            for md in self.modes:
                kw = 2.0 * np.pi * md.j / self.period
                coeffs[k] += md.c_plus * np.exp(1j * md.phase) * np.exp(kw * z0) * kw**k / fact
                coeffs[k] += md.c_minus * np.exp(-1j * md.phase) * np.exp(-kw * z0) * (-kw) ** k / fact
        return coeffs

    def sup_norm(self, cfg: CellConfig, m: int | None = None, n: tuple[int, int] = (321, 81)) -> float:
        """Sampled sup of |H| over the window Omega_m."""
        m = cfg.m if m is None else m
        xs = np.linspace(-m, m, n[0])
        ys = np.linspace(-1.0 - 0.5 * cfg.delta, 1.0 + 0.5 * cfg.delta, n[1])
        grid = np.column_stack([np.repeat(xs, n[1]), np.tile(ys, n[0])])
        return float(np.max(np.abs(self.value(grid))))

    @classmethod
    def parse(cls, text: str, period: float | None = None, modes: tuple[Mode, ...] = ()) -> "BackgroundField":
        """Parse a linear field spec such as 'x', 'y', 'x+2y', '2x-3y+1', '0'."""
        import re

        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty field spec")
        a = b = const = 0.0
        pos = 0
        term = re.compile(r"([+-]?)(\d+(?:\.\d*)?|\.\d+)?\*?([xy])?")
        while pos < len(s):
            mt = term.match(s, pos)
            if not mt or mt.end() == pos:
                raise ValueError(f"cannot parse field spec {text!r} at {s[pos:]!r}")
            sign = -1.0 if mt.group(1) == "-" else 1.0
            coef = float(mt.group(2)) if mt.group(2) is not None else 1.0
            var = mt.group(3)
            if var == "x":
                a += sign * coef
            elif var == "y":
                b += sign * coef
            elif mt.group(2) is not None:
                const += sign * coef
            else:
                raise ValueError(f"cannot parse field spec {text!r} at {s[pos:]!r}")
            pos = mt.end()
        return cls(a=a, b=b, const=const, period=period, modes=tuple(modes))

    def describe(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "const": self.const,
            "period": self.period,
            "modes": [
                {"j": md.j, "c_plus": md.c_plus, "c_minus": md.c_minus, "phase": md.phase}
                for md in self.modes
            ],
        }


def eval_background(H: BackgroundField, p) -> tuple[float, np.ndarray]:
    """Value and gradient of H at a single point."""
    pt = np.asarray(p, dtype=float).reshape(1, 2)
    return float(H.value(pt)[0]), H.gradient(pt)[0]


# ---------------------------------------------------------------------------
# free-space multipoles
# ---------------------------------------------------------------------------


def _as_complex(pts) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    return pts[:, 0] + 1j * pts[:, 1]


def _grad_from_fprime(fp: np.ndarray, parity: str) -> np.ndarray:
    # value = Re f  =>  grad = (Re f', -Im f'); value = Im f => (Im f', Re f')
    if parity == _COS:
        return np.column_stack([fp.real, -fp.imag])
    return np.column_stack([fp.imag, fp.real])


def freespace_multipole(pts, src, order: int, parity: str = _COS) -> tuple[np.ndarray, np.ndarray]:
    """Free-space multipole value and gradient.

    Order 0 is Re/Im log(z - z0); order m >= 1 is Re/Im (z - z0)^(-m).
    """
    if parity not in (_COS, _SIN):
        raise ValueError(f"parity must be 'cos' or 'sin', got {parity!r}")
    if order < 0:
        raise ValueError("order must be >= 0")
    z = _as_complex(pts) - complex(src[0], src[1])
    if np.any(z == 0):
        raise SourceEvaluationError("evaluation point coincides with the source")
    if order == 0:
        f = np.log(z)
        fp = 1.0 / z
    else:
        zi = z ** (-order)
        f = zi
        fp = -order * zi / z
    vals = f.real if parity == _COS else f.imag
    return vals, _grad_from_fprime(fp, parity)


# ---------------------------------------------------------------------------
# periodized multipoles via coth polynomials
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _coth_poly(order: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Coefficients of Q_m with sum_n (z-z0-inL)^(-m) = (pi/L)^m Q_m(coth, csch^2).

    Q_m is stored as (alpha, beta) over powers of s = csch^2:
    Q = sum_a alpha[a] s^a + coth * sum_a beta[a] s^a.  The recurrence is
    Q_1 = coth, Q_{m+1} = -(1/m) dQ_m/dw with coth' = -csch^2 and
    (csch^2)' = -2 csch^2 coth, reduced by coth^2 = 1 + csch^2.
    """
    if not (1 <= order <= MAX_ORDER + 1):
        raise ValueError(f"order must be in [1, {MAX_ORDER + 1}]")
    alpha = {0: 0.0}
    beta = {0: 1.0}
    for m in range(1, order):
        new_alpha: dict[int, float] = {}
        new_beta: dict[int, float] = {}
        for a, coef in alpha.items():
            if coef:
                new_beta[a] = new_beta.get(a, 0.0) + (-2.0 * a) * coef
        for a, coef in beta.items():
            if coef:
                new_alpha[a] = new_alpha.get(a, 0.0) + (-2.0 * a) * coef
                new_alpha[a + 1] = new_alpha.get(a + 1, 0.0) + (-(2.0 * a + 1.0)) * coef
        scale = -1.0 / m
        alpha = {a: scale * c for a, c in new_alpha.items()}
        beta = {a: scale * c for a, c in new_beta.items()}
    amax = max(list(alpha) + list(beta), default=0)
    return (
        tuple(alpha.get(a, 0.0) for a in range(amax + 1)),
        tuple(beta.get(a, 0.0) for a in range(amax + 1)),
    )


def periodized_sums(z: np.ndarray, z0: complex, period: float, orders: int) -> np.ndarray:
    """Lattice sums g_m = sum_n (z - z0 - i n period)^(-m) for m = 1..orders.

    Returns an array of shape (orders, len(z)).  Evaluation is the closed-form
    coth/csch^2 polynomial, overflow-safe at any horizontal distance.
    """
    z = np.asarray(z, dtype=complex)
    w = np.pi * (z - z0) / period
    coth, csch2 = coth_csch2(w)
    out = np.empty((orders, len(z)), dtype=complex)
    spow = {0: np.ones_like(csch2)}

    def s_to(a: int) -> np.ndarray:
        if a not in spow:
            spow[a] = s_to(a - 1) * csch2
        return spow[a]

    scale = np.pi / period
    for m in range(1, orders + 1):
        alpha, beta = _coth_poly(m)
        acc = np.zeros_like(csch2)
        for a, coef in enumerate(alpha):
            if coef:
                acc = acc + coef * s_to(a)
        bacc = np.zeros_like(csch2)
        for a, coef in enumerate(beta):
            if coef:
                bacc = bacc + coef * s_to(a)
        out[m - 1] = (scale**m) * (acc + coth * bacc)
    return out


def _check_off_lattice(z: np.ndarray, z0: complex, period: float):
    dz = np.asarray(z, dtype=complex) - z0
    k = np.round(dz.imag / period)
    if np.any((np.abs(dz.real) < 1e-14) & (np.abs(dz.imag - k * period) < 1e-14)):
        raise SourceEvaluationError("evaluation point coincides with the source lattice")


def periodized_multipole(pts, src, period: float, order: int, parity: str = _COS) -> tuple[np.ndarray, np.ndarray]:
    """Periodized multipole value and gradient.

    Order 0 (cos parity only) is log|sinh(pi (z - z0)/L)|, the monopole summed
    over the vertical lattice; orders m >= 1 are the exact lattice sums of the
    free-space elements.  The m = 0 sine element is excluded: the angle part
    carries a branch cut and the solver never needs it.
    """
    if parity not in (_COS, _SIN):
        raise ValueError(f"parity must be 'cos' or 'sin', got {parity!r}")
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}]")
    z0 = complex(src[0], src[1])
    z = _as_complex(pts)
    _check_off_lattice(z, z0, period)
    if order == 0:
        if parity == _SIN:
            raise ValueError("the periodized order-0 sine (angle) element is not exposed")
        w = np.pi * (z - z0) / period
        vals = logabs_sinh(w)
        g1 = periodized_sums(z, z0, period, 1)[0]
        return vals, _grad_from_fprime(g1, parity)
    sums = periodized_sums(z, z0, period, order + 1)
    f = sums[order - 1]
    fp = -order * sums[order]
    vals = f.real if parity == _COS else f.imag
    return vals, _grad_from_fprime(fp, parity)


def periodized_partial_sum(pts, src, period: float, order: int, parity: str, n_images: int) -> np.ndarray:
    """Direct image-sum oracle: sum over |n| <= n_images of free-space values.

    For order 0 the symmetric sum diverges with n_images; only differences
    between two evaluation points are meaningful there.
    """
    z0 = complex(src[0], src[1])
    z = _as_complex(pts)
    total = np.zeros(len(z))
    for n in range(-n_images, n_images + 1):
        zz = z - (z0 + 1j * n * period)
        if order == 0:
            f = np.log(np.abs(zz)) if parity == _COS else np.angle(zz)
        else:
            w = zz ** (-order)
            f = w.real if parity == _COS else w.imag
        total += f
    return total


@dataclass(frozen=True)
class BasisElement:
    """A named solver basis element anchored at a row-0 disk."""

    disk: DiskId
    order: int
    parity: str = _COS
    periodized: bool = True

    def __post_init__(self):
        if self.disk.row != 0:
            raise ValueError("basis elements are anchored at row-0 disks")
        if self.order == 0 and self.parity == _SIN:
            raise ValueError("order 0 exists only as the monopole (log) term")

    def evaluate(self, pts, cfg: CellConfig) -> tuple[np.ndarray, np.ndarray]:
        src = disk_center(self.disk, cfg)
        if self.periodized:
            return periodized_multipole(pts, src, cfg.period, self.order, self.parity)
        return freespace_multipole(pts, src, self.order, self.parity)
