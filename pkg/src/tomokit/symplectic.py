"""Symplectic tomography of quantum and classical states.

The symplectic tomogram w(X, mu, nu) is the distribution of the observable
mu*q + nu*p.  This module computes it two independent ways -- from a Fock
density matrix through the rotated-quadrature eigenbasis, and as a Radon
transform of a phase-space grid -- and inverts the Radon route back to a
phase-space density through the characteristic function.

Normalization conventions for phase-space grids:

* ``"unit-integral"``: integral f dq dp = 1; the tomogram is the plain line
  integral of f.
* ``"two-pi"``: (1/2pi) integral f dq dp = 1 (Wigner normalization); the line
  integral carries a 1/2pi prefactor so every tomogram slice still integrates
  to 1 in X.

The two conventions differ by exactly 2pi and are converted explicitly, never
guessed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.ndimage import spline_filter

from . import fock_core
from ._kernels import bspline_line_sums, hermite_functions
from ._threads import map_ordered
from .errors import AliasingWarning, DegenerateFrameError, DomainError, InputError
from .fock_core import DensityMatrix

__all__ = [
    "PhaseSpaceDensity",
    "WignerGrid",
    "SymplecticTomogram",
    "TomogramReport",
    "wigner_from_fock",
    "wigner_grid_from_fock",
    "wigner_displacement_check",
    "tomogram_from_fock",
    "tomogram_slices",
    "radon",
    "radon_sinogram",
    "inverse_radon",
    "optical_slice",
    "validate_tomogram",
]

_CONVENTIONS = ("unit-integral", "two-pi")


def _cell_weights(xs: np.ndarray) -> np.ndarray:
    w = np.full(xs.size, xs[1] - xs[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


class _Grid2D:
    """Rectangular (q, p) grid with values[i, j] at (qs[i], ps[j])."""

    def __init__(self, qs, ps, values, convention: str):
        self.qs = np.asarray(qs, dtype=float)
        self.ps = np.asarray(ps, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.values.shape != (self.qs.size, self.ps.size):
            raise InputError(
                f"grid values shape {self.values.shape} does not match "
                f"({self.qs.size}, {self.ps.size})"
            )
        if convention not in _CONVENTIONS:
            raise InputError(f"convention must be one of {_CONVENTIONS}, got {convention!r}")
        self.convention = convention
        self._coef = None

    def integral(self) -> float:
        wq = _cell_weights(self.qs)
        wp = _cell_weights(self.ps)
        return float(wq @ self.values @ wp)

    def spline_coefficients(self) -> np.ndarray:
        if self._coef is None:
            self._coef = spline_filter(self.values, order=3, mode="mirror")
        return self._coef


class PhaseSpaceDensity(_Grid2D):
    """Nonnegative classical probability density on a rectangular (q, p) grid."""

    def __init__(self, qs, ps, values, convention: str = "unit-integral"):
        super().__init__(qs, ps, values, convention)
        if self.values.min() < -1e-12:
            raise DomainError(f"density has negative sample {self.values.min():.3e}")
        target = 1.0 if convention == "unit-integral" else 2 * math.pi
        defect = abs(self.integral() - target)
        if defect > 1e-6 * target:
            warnings.warn(
                f"density integral off by {defect:.3e} from the declared "
                f"{self.convention} normalization",
                UserWarning,
                stacklevel=2,
            )

    def as_convention(self, convention: str) -> "PhaseSpaceDensity":
        if convention == self.convention:
            return self
        factor = 2 * math.pi if convention == "two-pi" else 1 / (2 * math.pi)
        return PhaseSpaceDensity(self.qs, self.ps, self.values * factor, convention)


class WignerGrid(_Grid2D):
    """Wigner function samples; real, possibly negative, (1/2pi) integral = 1."""

    def __init__(self, qs, ps, values):
        super().__init__(qs, ps, values, "two-pi")

    def normalization_defect(self) -> float:
        return abs(self.integral() / (2 * math.pi) - 1.0)


@dataclass
class SymplecticTomogram:
    """Sampled w(X, mu, nu): one (mu_s, nu_s) direction per row of values.

    ``evaluator`` (optional) computes w at arbitrary (X, mu, nu) by the same
    route that produced the samples; it is what makes homogeneity checks and
    off-grid optical slices possible.
    """

    xs: np.ndarray
    mus: np.ndarray
    nus: np.ndarray
    values: np.ndarray
    evaluator: Callable | None = field(default=None, repr=False)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.mus = np.atleast_1d(np.asarray(self.mus, dtype=float))
        self.nus = np.atleast_1d(np.asarray(self.nus, dtype=float))
        self.values = np.asarray(self.values, dtype=float)
        if self.mus.shape != self.nus.shape:
            raise InputError("mus and nus must have equal length")
        if self.values.shape != (self.mus.size, self.xs.size):
            raise InputError(
                f"values shape {self.values.shape} does not match "
                f"({self.mus.size}, {self.xs.size})"
            )

    @property
    def angles(self) -> np.ndarray:
        return np.arctan2(self.nus, self.mus)

    def is_unit_circle(self, tol: float = 1e-9) -> bool:
        return bool(np.abs(np.hypot(self.mus, self.nus) - 1.0).max() <= tol)

    def slice_normalizations(self) -> np.ndarray:
        return self.values @ _cell_weights(self.xs)


# ---------------------------------------------------------------------------
# Wigner function via displaced parity
# ---------------------------------------------------------------------------

def wigner_from_fock(rho: DensityMatrix, q: float, p: float) -> float:
    """W(q, p) = 2 Tr[rho D(beta) (-1)^n D(-beta)], beta = (q + ip)/sqrt(2)."""
    beta = complex(q, p) / math.sqrt(2.0)
    D = fock_core.displacement(beta, rho.dim)
    signs = (-1.0) ** np.arange(rho.dim)
    # Tr[rho D P D^H] with P diagonal: contract without forming D P D^H
    M = (D * signs[None, :]) @ D.conj().T
    return float(2.0 * np.sum(rho.mat.T * M).real)


def wigner_grid_from_fock(rho: DensityMatrix, qs, ps) -> WignerGrid:
    """Evaluate the displaced-parity Wigner function on a rectangular grid.

    Cost is one displacement build per grid point; intended for moderate
    lattices (cross-checks), not for large rasters.
    """
    qs = np.asarray(qs, dtype=float)
    ps = np.asarray(ps, dtype=float)

    def row(qv):
        return [wigner_from_fock(rho, qv, pv) for pv in ps]

    values = np.array(map_ordered(row, qs))
    return WignerGrid(qs, ps, values)


def wigner_displacement_check(rho: DensityMatrix, alpha: complex, q: float, p: float) -> float:
    """Residual |W_{rho_alpha}(q, p) - W_rho(q + sqrt2 Re a, p + sqrt2 Im a)|.

    rho_alpha = D(alpha)^-1 rho D(alpha) is built by explicit conjugation, so
    the two sides go through genuinely different arithmetic.
    """
    alpha = complex(alpha)
    D = fock_core.displacement(alpha, rho.dim)
    rho_a = DensityMatrix(D.conj().T @ rho.mat @ D, _validate=False)
    lhs = wigner_from_fock(rho_a, q, p)
    rhs = wigner_from_fock(rho, q + math.sqrt(2) * alpha.real, p + math.sqrt(2) * alpha.imag)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# tomogram from the Fock representation
# ---------------------------------------------------------------------------

def tomogram_from_fock(rho: DensityMatrix, X, mu: float, nu: float):
    """w(X, mu, nu) = <delta(mu q + nu p - X)> through the rotated quadrature.

    With r = hypot(mu, nu) and theta = atan2(nu, mu),

        w = (1/r) sum_{mn} rho_mn e^{i(n-m)theta} psi_m(X/r) psi_n(X/r),

    where psi_n are the oscillator eigenfunctions.  Exactly homogeneous by
    construction; must (and does, see tests) agree with the Radon transform
    of the Wigner function.
    """
    r = math.hypot(mu, nu)
    if r == 0.0:
        raise DegenerateFrameError("(mu, nu) = (0, 0) does not define a quadrature")
    theta = math.atan2(nu, mu)
    x_arr = np.atleast_1d(np.asarray(X, dtype=float)) / r
    psi = hermite_functions(x_arr, rho.dim)
    phase = np.exp(1j * theta * np.arange(rho.dim))
    pv = phase[:, None] * psi
    w = np.einsum("mj,mn,nj->j", pv.conj(), rho.mat, pv).real / r
    return float(w[0]) if np.isscalar(X) or np.asarray(X).ndim == 0 else w


def tomogram_slices(rho: DensityMatrix, xs, phis) -> SymplecticTomogram:
    """Optical-slice family w(X, cos phi, sin phi) for phi over [0, pi)."""
    xs = np.asarray(xs, dtype=float)
    phis = np.asarray(phis, dtype=float)
    rows = map_ordered(
        lambda phi: tomogram_from_fock(rho, xs, math.cos(phi), math.sin(phi)), phis
    )
    return SymplecticTomogram(
        xs=xs,
        mus=np.cos(phis),
        nus=np.sin(phis),
        values=np.array(rows),
        evaluator=lambda X, mu, nu: tomogram_from_fock(rho, X, mu, nu),
    )


# ---------------------------------------------------------------------------
# Radon transform of a phase-space grid
# ---------------------------------------------------------------------------

def _radon_prefactor(f: _Grid2D) -> float:
    return 1.0 / (2 * math.pi) if f.convention == "two-pi" else 1.0


def radon(f: PhaseSpaceDensity | WignerGrid, X, mu: float, nu: float):
    """Line integral of f over mu q + nu p = X (with the convention prefactor).

    The grid is lifted to a cubic B-spline surface once and sampled along the
    line; the delta-function scaling contributes the usual 1/r with
    r = hypot(mu, nu).
    """
    r = math.hypot(mu, nu)
    if r == 0.0:
        raise DegenerateFrameError("(mu, nu) = (0, 0) does not define a line family")
    c, s = mu / r, nu / r
    xs = np.atleast_1d(np.asarray(X, dtype=float)) / r
    coef = f.spline_coefficients()
    dq = f.qs[1] - f.qs[0]
    dp = f.ps[1] - f.ps[0]
    if min(dq, dp) <= 0:
        raise InputError("grid axes must be strictly increasing")
    half = 0.5 * math.hypot(f.qs[-1] - f.qs[0], f.ps[-1] - f.ps[0])
    dt = 0.5 * min(dq, dp)
    nt = int(2 * half / dt) + 1
    vals = bspline_line_sums(
        coef, xs * c, xs * s, -s, c, -half, dt, nt, f.qs[0], dq, f.ps[0], dp
    )
    out = vals * (_radon_prefactor(f) / r)
    return float(out[0]) if np.isscalar(X) or np.asarray(X).ndim == 0 else out


def radon_sinogram(f: PhaseSpaceDensity | WignerGrid, xs, phis) -> SymplecticTomogram:
    """Stack of unit-circle Radon slices, one per angle in [0, pi)."""
    xs = np.asarray(xs, dtype=float)
    phis = np.asarray(phis, dtype=float)
    n_along = max(f.qs.size, f.ps.size)
    if xs.size < n_along // 4:
        warnings.warn(
            f"only {xs.size} X-samples for a {f.qs.size}x{f.ps.size} grid; "
            "the sinogram under-resolves the grid",
            AliasingWarning,
            stacklevel=2,
        )
    rows = map_ordered(lambda phi: radon(f, xs, math.cos(phi), math.sin(phi)), phis)
    return SymplecticTomogram(
        xs=xs,
        mus=np.cos(phis),
        nus=np.sin(phis),
        values=np.array(rows),
        evaluator=lambda X, mu, nu: radon(f, X, mu, nu),
    )


# ---------------------------------------------------------------------------
# inverse Radon via the characteristic function (Fourier-slice route)
# ---------------------------------------------------------------------------

def inverse_radon(
    tomo: SymplecticTomogram,
    qs,
    ps,
    convention: str = "two-pi",
    support_threshold: float = 1e-6,
    freq_max: float | None = None,
) -> PhaseSpaceDensity | WignerGrid:
    """Reconstruct a phase-space grid from unit-circle tomogram slices.

    Factorized route: the 1-D Fourier transform of each slice at radial
    frequency r gives the characteristic function G(r cos phi, r sin phi)
    (Fourier-slice theorem, using homogeneity); polar samples of G are pushed
    onto a Cartesian frequency grid by bilinear interpolation -- the dominant
    error source -- and the density is the 2-D inverse transform with the
    1/(4 pi^2) prefactor.

    The radial frequency window is detected from the decay of |G| below
    ``support_threshold`` (relative); pushing the threshold far lower makes
    the window chase quadrature noise in the input samples and coarsens the
    interpolation, so 1e-6 is a deliberate floor.  Pass ``freq_max`` to pin
    the window instead (the transform is then exactly linear in the samples).
    """
    if not tomo.is_unit_circle():
        raise InputError("inverse_radon expects slices with mu^2 + nu^2 = 1")
    phis = tomo.angles
    if phis.min() < -1e-12 or phis.max() >= math.pi:
        raise InputError("inverse_radon expects angles in [0, pi)")
    dphis = np.diff(phis)
    if len(phis) < 2 or dphis.min() <= 0 or abs(dphis.max() - dphis.min()) > 1e-9:
        raise InputError("inverse_radon expects strictly increasing, uniform angles")
    dphi = float(dphis[0])
    qs = np.asarray(qs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    xs = tomo.xs
    dx = xs[1] - xs[0]
    wts = _cell_weights(xs)

    # radial support of the characteristic function
    rcap = math.pi / dx
    if freq_max is not None:
        R = min(float(freq_max), rcap)
    else:
        rprobe = np.linspace(0.0, rcap, 600)
        probe = np.abs(tomo.values @ (np.exp(1j * np.outer(rprobe, xs)) * wts).T)
        gmax = probe.max()
        if gmax == 0.0:
            raise InputError("tomogram is identically zero")
        above = np.where((probe > support_threshold * gmax).any(axis=0))[0]
        R = min(rprobe[above[-1]] * 1.15 + 0.5, rcap)
    if R * dphi > 0.35:
        warnings.warn(
            f"{len(phis)} angles under-sample the frequency disk of radius {R:.1f}; "
            "expect angular aliasing",
            AliasingWarning,
            stacklevel=2,
        )

    # polar table of G, signed radius; row at phi = pi duplicates phi = 0 reversed
    n_freq = max(257, 2 * int(math.ceil(R / 0.08)) + 1)
    mus = np.linspace(-R, R, n_freq)
    dmu = mus[1] - mus[0]
    rmax = R * math.sqrt(2.0) + dmu
    dr = dmu / 4.0
    n_rad = int(math.ceil(2 * rmax / dr)) | 1
    rs = np.linspace(-rmax, rmax, n_rad)
    polar = tomo.values @ (np.exp(1j * np.outer(rs, xs)) * wts).T
    polar = np.vstack([polar, polar[0, ::-1]])

    # bilinear polar -> Cartesian
    MU, NU = np.meshgrid(mus, mus, indexing="ij")
    ang = np.arctan2(NU, MU)
    rad = np.hypot(MU, NU)
    flip = ang < 0
    ang = np.where(flip, ang + math.pi, ang)
    rad = np.where(flip, -rad, rad)
    ai = ang / dphi
    ri = (rad - rs[0]) / (rs[1] - rs[0])
    a0 = np.clip(np.floor(ai).astype(np.intp), 0, polar.shape[0] - 2)
    r0 = np.clip(np.floor(ri).astype(np.intp), 0, n_rad - 2)
    ua = ai - a0
    ur = ri - r0
    G = (
        (1 - ua) * (1 - ur) * polar[a0, r0]
        + (1 - ua) * ur * polar[a0, r0 + 1]
        + ua * (1 - ur) * polar[a0 + 1, r0]
        + ua * ur * polar[a0 + 1, r0 + 1]
    )

    # f(q,p) = (1/4pi^2) integral G(mu, nu) e^{-i(mu q + nu p)} dmu dnu
    wmu = _cell_weights(mus)
    Eq = np.exp(-1j * np.outer(qs, mus)) * wmu
    Ep = np.exp(-1j * np.outer(ps, mus)) * wmu
    f = (Eq @ G @ Ep.T).real / (4 * math.pi ** 2)

    if convention == "two-pi":
        return WignerGrid(qs, ps, 2 * math.pi * f)
    return PhaseSpaceDensity(qs, ps, np.clip(f, 0.0, None), "unit-integral")


# ---------------------------------------------------------------------------
# slices and validation
# ---------------------------------------------------------------------------

def optical_slice(tomo: SymplecticTomogram, phi: float) -> np.ndarray:
    """w(X, cos phi, sin phi) over the tomogram's X grid (homodyne distribution)."""
    if tomo.evaluator is not None:
        return np.asarray(tomo.evaluator(tomo.xs, math.cos(phi), math.sin(phi)), dtype=float)
    # fall back to sampled rows; phi + pi maps to (X -> -X) by homogeneity
    for shift, sign in ((0.0, 1.0), (math.pi, -1.0), (-math.pi, -1.0), (2 * math.pi, 1.0), (-2 * math.pi, 1.0)):
        target = phi + shift
        hit = np.where(np.abs(tomo.angles - target) < 1e-12)[0]
        if hit.size:
            row = tomo.values[hit[0]]
            if sign > 0:
                return row.copy()
            if not np.allclose(tomo.xs, -tomo.xs[::-1], atol=1e-12):
                raise InputError("mirrored slice needs a symmetric X grid or an evaluator")
            return row[::-1].copy()
    raise InputError(f"angle {phi!r} not sampled and no evaluator attached")


@dataclass(frozen=True)
class TomogramReport:
    """Axioms check: worst negativity, per-slice normalization, homogeneity."""

    max_negativity: float
    normalization_errors: np.ndarray
    homogeneity_residual: float | None
    homogeneity_lambdas: tuple

    def ok(self, neg_tol: float = 1e-12, norm_tol: float = 1e-6, hom_tol: float = 1e-8) -> bool:
        fine = self.max_negativity <= neg_tol and self.normalization_errors.max() <= norm_tol
        if self.homogeneity_residual is not None:
            fine = fine and self.homogeneity_residual <= hom_tol
        return bool(fine)


def validate_tomogram(
    tomo: SymplecticTomogram, lambdas: tuple = (-2.0, 0.5, 3.0)
) -> TomogramReport:
    """Report-only check of nonnegativity, X-normalization and homogeneity.

    Homogeneity |lambda| w(lambda X, lambda mu, lambda nu) = w(X, mu, nu) is
    sampled at the given scale factors on a thinned subset of the grid; it
    needs the evaluator and is reported as None without one.
    """
    max_neg = float(max(0.0, -tomo.values.min()))
    norm_err = np.abs(tomo.slice_normalizations() - 1.0)

    residual = None
    if tomo.evaluator is not None:
        xs = tomo.xs[:: max(1, tomo.xs.size // 8)]
        worst = 0.0
        for k in range(0, tomo.mus.size, max(1, tomo.mus.size // 4)):
            mu, nu = tomo.mus[k], tomo.nus[k]
            base = np.asarray(tomo.evaluator(xs, mu, nu), dtype=float)
            for lam in lambdas:
                scaled = np.asarray(tomo.evaluator(lam * xs, lam * mu, lam * nu), dtype=float)
                worst = max(worst, float(np.abs(abs(lam) * scaled - base).max()))
        residual = worst
    return TomogramReport(
        max_negativity=max_neg,
        normalization_errors=norm_err,
        homogeneity_residual=residual,
        homogeneity_lambdas=tuple(lambdas),
    )
