"""Photon-number tomography: omega(n, alpha) and the s-ordered reconstruction.

Convention: the tomogram is

    omega(n, alpha) = <n| D(alpha) rho D(alpha)^H |n>,

the photon statistics of the state displaced by -alpha.  (The opposite
conjugation D^H rho D differs only by alpha -> -alpha; this module exposes
one convention and the sign map is stated here once.)

Reconstruction uses the s-ordered quantizer

    Q(n, alpha) = 4 / (pi (1 - s^2)) * t^-n * D(alpha)^H t^(a^dag a) D(alpha),
    t = (s - 1)/(s + 1),

summed over n and integrated d^2 alpha = dRe dIm with trapezoid weights on a
square grid clipped to a disk.  For each alpha the n-series is alternating
with term magnitudes peaking near |alpha|^2 / |t|; the series must be summed
past that peak before it converges, which is what the divergence guard
watches for (growth of the last few n-blocks).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import fock_core, gaussian
from .errors import (
    DiscrepancyWarning,
    DivergenceError,
    DomainError,
    InputError,
    TruncationWarning,
)
from .fock_core import DensityMatrix
from .gaussian import GaussianState
from .hermite2 import HermiteContext, hermite2_log_abs

__all__ = [
    "PhotonTomogram",
    "ReconstructionConfig",
    "pn_tomogram",
    "pn_tomogram_grid",
    "pn_quantizer",
    "pn_reconstruct",
    "r_matrix",
    "y_args",
    "p0",
    "pn_tomogram_gaussian",
]

_SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class ReconstructionConfig:
    """Grid and ordering parameters for the photon-number scheme.

    ``s`` is restricted to (0, 1) so that |t| = |s-1|/|s+1| < 1 and the
    operator power t^(a^dag a) is a contraction.  Note that small s converges
    fastest in n (|t| -> 1 keeps the t^-n prefactor tame); see
    :func:`pn_reconstruct`.
    """

    dim: int
    n_max: int
    s: float = 0.5
    alpha_radius: float = 3.0
    n_alpha: int = 41

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise InputError(f"ordering parameter s must be in (0, 1), got {self.s}")
        if not 0 <= self.n_max < self.dim:
            raise InputError(f"need 0 <= n_max < dim, got n_max={self.n_max}, dim={self.dim}")
        if self.n_alpha < 2 or self.alpha_radius <= 0:
            raise InputError("alpha grid must have n_alpha >= 2 and positive radius")

    @property
    def t(self) -> float:
        return (self.s - 1.0) / (self.s + 1.0)

    @property
    def prefactor(self) -> float:
        return 4.0 / (math.pi * (1.0 - self.s ** 2))

    def alpha_axis(self) -> np.ndarray:
        return np.linspace(-self.alpha_radius, self.alpha_radius, self.n_alpha)

    def alpha_weights(self) -> np.ndarray:
        """Trapezoid weights on the square grid, zeroed outside the disk."""
        ax = self.alpha_axis()
        w = np.full(ax.size, ax[1] - ax[0])
        w[0] *= 0.5
        w[-1] *= 0.5
        w2 = np.outer(w, w)
        re, im = np.meshgrid(ax, ax, indexing="ij")
        w2[np.hypot(re, im) > self.alpha_radius + 1e-12] = 0.0
        return w2


@dataclass
class PhotonTomogram:
    """omega(n, alpha) sampled over n = 0..n_max and a square alpha grid."""

    values: np.ndarray          # shape (n_max + 1, n_re, n_im)
    re_alphas: np.ndarray
    im_alphas: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.re_alphas = np.asarray(self.re_alphas, dtype=float)
        self.im_alphas = np.asarray(self.im_alphas, dtype=float)
        if self.values.ndim != 3 or self.values.shape[1:] != (
            self.re_alphas.size,
            self.im_alphas.size,
        ):
            raise InputError(f"values shape {self.values.shape} inconsistent with alpha axes")

    @property
    def n_max(self) -> int:
        return self.values.shape[0] - 1

    def negativity(self) -> float:
        return float(max(0.0, -self.values.min()))

    def normalization_defect(self) -> float:
        """Worst deviation of sum_n omega(n, alpha) from 1 over the grid."""
        return float(np.abs(self.values.sum(axis=0) - 1.0).max())


def pn_tomogram(rho: DensityMatrix, n: int, alpha: complex) -> float:
    """omega(n, alpha) = <n|D(alpha) rho D(alpha)^H|n>."""
    if not 0 <= n < rho.dim:
        raise DomainError(f"photon index n={n} outside 0..{rho.dim - 1}")
    D = fock_core.displacement(alpha, rho.dim)
    row = D[n, :]
    return float(np.real(row @ rho.mat @ row.conj()))


def _pn_all(rho_mat: np.ndarray, D: np.ndarray) -> np.ndarray:
    """diag(D rho D^H) for all n at once."""
    return np.real(np.einsum("na,ab,nb->n", D, rho_mat, D.conj()))


def pn_tomogram_grid(rho: DensityMatrix, cfg: ReconstructionConfig) -> PhotonTomogram:
    if cfg.dim != rho.dim:
        raise InputError(f"config dim {cfg.dim} != state dim {rho.dim}")
    ax = cfg.alpha_axis()
    values = np.empty((cfg.n_max + 1, ax.size, ax.size))
    _warn_disk_truncation(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for i, re in enumerate(ax):
            for j, im in enumerate(ax):
                D = fock_core.displacement(complex(re, im), rho.dim)
                values[:, i, j] = _pn_all(rho.mat, D)[: cfg.n_max + 1]
    return PhotonTomogram(values=values, re_alphas=ax, im_alphas=ax)


def _warn_disk_truncation(cfg: ReconstructionConfig) -> None:
    """One aggregate notice instead of one per alpha node in grid loops."""
    if cfg.alpha_radius ** 2 > cfg.dim / 4:
        warnings.warn(
            f"alpha disk reaches |alpha|^2 = {cfg.alpha_radius ** 2:.1f}, large for "
            f"dimension {cfg.dim}; edge-of-disk matrix elements feel the truncation",
            TruncationWarning,
            stacklevel=3,
        )


def pn_quantizer(n: int, alpha: complex, cfg: ReconstructionConfig) -> np.ndarray:
    """Quantizer 4/(pi(1-s^2)) t^-n D^H(alpha) t^(a^dag a) D(alpha).

    Uses the identity (a^dag + alpha*)(a + alpha) = D^H(alpha) a^dag a D(alpha)
    to turn the operator power into a diagonal conjugation; Hermitian for the
    real t used here.
    """
    if not 0 <= n <= cfg.n_max:
        raise DomainError(f"photon index n={n} outside 0..{cfg.n_max}")
    D = fock_core.displacement(alpha, cfg.dim)
    tk = cfg.t ** np.arange(cfg.dim)
    return cfg.prefactor * cfg.t ** (-n) * (D.conj().T @ (tk[:, None] * D))


def pn_reconstruct(
    omega: PhotonTomogram,
    cfg: ReconstructionConfig,
    divergence_guard: bool = True,
) -> np.ndarray:
    """Density matrix from a photon-number tomogram (Hermitian, not revalidated).

    The alpha integral is factored: for each grid point the matrix
    M(alpha) = D^H t^(a^dag a) D is built once and scaled by the n-summed
    coefficient sum_n t^-n omega(n, alpha).

    The divergence guard tracks per-n block magnitudes
    |t|^-n * sum_alpha w |omega(n, alpha)| and raises :class:`DivergenceError`
    when the final blocks still grow monotonically -- the signature of an
    n_max below the convergence turnover of the alternating series.  Because
    t < 0 makes consecutive block magnitudes wiggle, growth is measured along
    each parity chain (three consecutive same-parity blocks each); growth
    among *early* blocks is normal and ignored.
    """
    if omega.n_max != cfg.n_max:
        raise InputError(f"omega carries n_max={omega.n_max}, config says {cfg.n_max}")
    ax = cfg.alpha_axis()
    if omega.re_alphas.size != ax.size or not np.allclose(omega.re_alphas, ax, atol=1e-12):
        raise InputError("omega alpha grid does not match the config grid")
    w2 = cfg.alpha_weights()
    ns = np.arange(cfg.n_max + 1)
    tinv = cfg.t ** (-ns.astype(float))

    if divergence_guard and cfg.n_max >= 5:
        blocks = np.abs(tinv) * np.einsum("nij,ij->n", np.abs(omega.values), w2)
        chains_grow = all(
            blocks[-1 - k] > blocks[-3 - k] > blocks[-5 - k] for k in (0, 1)
        )
        if chains_grow and blocks[-1] > 0:
            raise DivergenceError(
                "reconstruction blocks still growing at n_max="
                f"{cfg.n_max} (last block magnitudes {blocks[-4:].tolist()}); "
                "increase n_max, shrink the alpha disk, or lower s"
            )

    tk = cfg.t ** np.arange(cfg.dim)
    acc = np.zeros((cfg.dim, cfg.dim), dtype=complex)
    coeffs = np.tensordot(tinv, omega.values, axes=(0, 0)) * w2
    _warn_disk_truncation(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for i, re in enumerate(ax):
            for j, im in enumerate(ax):
                c = coeffs[i, j]
                if c == 0.0:
                    continue
                D = fock_core.displacement(complex(re, im), cfg.dim)
                acc += c * (D.conj().T @ (tk[:, None] * D))
    acc *= cfg.prefactor
    return (acc + acc.conj().T) / 2.0


# ---------------------------------------------------------------------------
# analytic branch for Gaussian states
# ---------------------------------------------------------------------------

def r_matrix(g: GaussianState) -> np.ndarray:
    """Hermite-polynomial matrix R = (1/L) [[2(spp-sqq-2i spq), 1-4d], [1-4d, conj]]."""
    mom = gaussian.moments(g)
    if abs(mom.L) < _SINGULAR_TOL:
        raise DomainError(f"L = 1 + 2T + 4d = {mom.L} too close to zero")
    off = 1.0 - 4.0 * mom.d
    d11 = 2.0 * (g.sigma_pp - g.sigma_qq - 2j * g.sigma_pq)
    d22 = 2.0 * (g.sigma_pp - g.sigma_qq + 2j * g.sigma_pq)
    return np.array([[d11, off], [off, d22]], dtype=complex) / mom.L


def y_args(g: GaussianState, alpha: complex) -> tuple[complex, complex]:
    """Arguments of the diagonal Hermite polynomial; y2 = conj(y1).

    y1 = sqrt2/(2T - 4d - 1) [ (<q> - i<p> + sqrt2 a*)(T - 1)
                               + (spp - sqq + 2i spq)(<q> + i<p> + sqrt2 a) ].

    The denominator vanishes on the coherent family (d = 1/4, T = 1) and on a
    measure-zero set beyond it; callers route those to the matrix branch.
    """
    alpha = complex(alpha)
    mom = gaussian.moments(g)
    den = 2.0 * mom.T - 4.0 * mom.d - 1.0
    if abs(den) < _SINGULAR_TOL:
        raise DomainError(f"y-argument denominator 2T - 4d - 1 = {den:.3e} is singular")
    rt2 = math.sqrt(2.0)
    y1 = (rt2 / den) * (
        (g.mean_q - 1j * g.mean_p + rt2 * np.conj(alpha)) * (mom.T - 1.0)
        + (g.sigma_pp - g.sigma_qq + 2j * g.sigma_pq) * (g.mean_q + 1j * g.mean_p + rt2 * alpha)
    )
    return complex(y1), complex(np.conj(y1))


def p0(g: GaussianState, alpha: complex) -> float:
    """No-photon probability of the displaced state (double-exponential form).

    P0 = (2/sqrt L) exp{-[(2sqq+1) P^2 + (2spp+1) Q^2]/L} exp{4 spq P Q / L}
    with Q = <q> + sqrt2 Re alpha, P = <p> + sqrt2 Im alpha.
    """
    alpha = complex(alpha)
    mom = gaussian.moments(g)
    if mom.L <= 0:
        raise DomainError(f"L = {mom.L} must be positive")
    rt2 = math.sqrt(2.0)
    Q = g.mean_q + rt2 * alpha.real
    P = g.mean_p + rt2 * alpha.imag
    expo = (
        -((2.0 * g.sigma_qq + 1.0) * P ** 2 + (2.0 * g.sigma_pp + 1.0) * Q ** 2) / mom.L
        + 4.0 * g.sigma_pq * P * Q / mom.L
    )
    return float(2.0 / math.sqrt(mom.L) * math.exp(expo))


def _auto_dim(g: GaussianState, n: int, alpha: complex) -> int:
    mom = gaussian.moments(g)
    energy = 0.5 * (mom.T - 1.0) + 0.5 * (g.mean_q ** 2 + g.mean_p ** 2)
    scale = energy + abs(alpha) ** 2 + math.sqrt(energy + 1.0) * abs(alpha)
    return max(32, n + 8, int(6 * scale) + 24)


def pn_tomogram_gaussian(
    g: GaussianState, n: int, alpha: complex, ctx: HermiteContext | None = None
) -> float:
    """omega(n, alpha) for a Gaussian state: P0(alpha) H^R_nn(y1, y2) / n!.

    This is the analytic branch; it must agree with the matrix branch
    pn_tomogram(to_fock(g), n, alpha), which is the authoritative value.  On
    the singular denominator set (vacuum and all coherent states) the value is
    computed by the matrix branch instead, with a diagnostic warning.  A
    negative result beyond -1e-9 is reported as a formula discrepancy.
    """
    if n < 0:
        raise DomainError(f"photon index must be nonnegative, got {n}")
    alpha = complex(alpha)
    mom = gaussian.moments(g)
    den = 2.0 * mom.T - 4.0 * mom.d - 1.0
    if abs(den) < _SINGULAR_TOL:
        warnings.warn(
            "y-argument denominator singular (coherent-family state); "
            "routing to the Fock matrix branch",
            DiscrepancyWarning,
            stacklevel=2,
        )
        rho = gaussian.to_fock(g, _auto_dim(g, n, alpha))
        return pn_tomogram(rho, n, alpha)

    if ctx is None:
        ctx = HermiteContext(r_matrix(g))
    y1, y2 = y_args(g, alpha)
    log_p0 = math.log(p0(g, alpha))
    log_h, phase = hermite2_log_abs(ctx.eval_scaled(n, n, y1, y2))
    if log_h == -math.inf:
        return 0.0
    value = math.exp(log_p0 + log_h - gammaln(n + 1)) * phase
    if abs(value.imag) > 1e-9 * max(1.0, abs(value.real)):
        warnings.warn(
            f"analytic photon probability has imaginary part {value.imag:.3e}",
            DiscrepancyWarning,
            stacklevel=2,
        )
    out = float(value.real)
    if out < -1e-9:
        warnings.warn(
            f"analytic photon probability {out:.3e} < 0: candidate formula discrepancy "
            f"at n={n}, alpha={alpha}, state={g}",
            DiscrepancyWarning,
            stacklevel=2,
        )
    return out
