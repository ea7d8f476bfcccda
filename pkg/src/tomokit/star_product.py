"""Scheme-agnostic quantizer/dequantizer engine and the symplectic kernels.

A *scheme* is a dequantizer family U(x) (symbols w(x) = Tr[rho U(x)]) plus a
quantizer family Q(x) with a declared quadrature grid (reconstruction
rho = sum_i w_i w(x_i) Q(x_i)).  Two schemes ship: symplectic and
photon-number.  Star products are computed by the trace route
Tr[rho1 rho2 U(x)], which is exact at finite truncation; the explicit
symplectic star-product kernels are kept in factored form
amplitude x delta(constraint) and never discretized.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import fock_core, photon_number
from ._kernels import hermite_functions
from .errors import DimensionError, SchemeError, SingularSliceError, TruncationWarning
from .fock_core import DensityMatrix
from .photon_number import ReconstructionConfig

__all__ = [
    "KernelValue",
    "DequantizerFamily",
    "QuantizerFamily",
    "Scheme",
    "symbol",
    "sample_symbols",
    "reconstruct",
    "star_trace",
    "kernel_symplectic_quantum",
    "kernel_symplectic_classical",
    "kernel_relation_check",
    "symplectic_scheme",
    "photon_scheme",
]

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class KernelValue:
    """Factored kernel sample: amplitude x delta(delta_argument).

    The delta factor stays symbolic; two kernel values are comparable only
    when their delta arguments agree to 1e-12.
    """

    amplitude: complex
    delta_argument: float

    def ratio(self, other: "KernelValue") -> complex:
        # delta is even, so arguments matching up to overall sign share support
        same = abs(self.delta_argument - other.delta_argument) <= 1e-12
        mirrored = abs(self.delta_argument + other.delta_argument) <= 1e-12
        if not (same or mirrored):
            raise SchemeError(
                "kernel values have different delta supports: "
                f"{self.delta_argument} vs {other.delta_argument}"
            )
        if other.amplitude == 0:
            raise ZeroDivisionError("kernel amplitude ratio with zero denominator")
        return self.amplitude / other.amplitude


@dataclass(frozen=True)
class DequantizerFamily:
    """Label-point -> Hermitian operator matrix; optional fast grid sampler."""

    label: str
    eval: Callable[[tuple], np.ndarray]
    hermitian: bool = True
    sample: Callable[[DensityMatrix, Sequence[tuple]], np.ndarray] | None = field(
        default=None, repr=False
    )


@dataclass(frozen=True)
class QuantizerFamily:
    """Label-point -> operator matrix plus the declared quadrature rule.

    ``points`` and ``weights`` define the reconstruction grid; ``reduce`` is an
    optional factored accumulator that computes the identical weighted sum
    faster than the generic point loop; ``tail`` estimates the quadrature tail
    error from the sampled symbols.
    """

    label: str
    eval: Callable[[tuple], np.ndarray]
    points: tuple
    weights: np.ndarray
    domain: str
    reduce: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    tail: Callable[[np.ndarray], float] | None = field(default=None, repr=False)


@dataclass(frozen=True)
class Scheme:
    dequantizer: DequantizerFamily
    quantizer: QuantizerFamily


class _BoxPoints(Sequence):
    """Lazy (X, mu, nu) label grid; X-major, nu fastest.  O(1) memory."""

    def __init__(self, xs: np.ndarray, mus: np.ndarray):
        self.xs = xs
        self.mus = mus

    def __len__(self) -> int:
        return self.xs.size * self.mus.size ** 2

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(len(self)))]
        n_mu = self.mus.size
        i = int(i)
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        ix, rest = divmod(i, n_mu * n_mu)
        imu, inu = divmod(rest, n_mu)
        return (float(self.xs[ix]), float(self.mus[imu]), float(self.mus[inu]))


def _as_matrix(rho) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def _trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    if a.shape != b.shape:
        raise DimensionError(f"operator shapes differ: {a.shape} vs {b.shape}")
    return complex(np.sum(a.T * b))


def _maybe_real(value: complex, hermitian: bool, label: str):
    if not hermitian:
        return value
    if abs(value.imag) > _IMAG_TOL:
        warnings.warn(
            f"{label}: symbol has imaginary part {value.imag:.3e} despite a Hermitian "
            "dequantizer",
            UserWarning,
            stacklevel=3,
        )
        return value
    return value.real


def symbol(rho, U: DequantizerFamily, x: tuple):
    """Tomographic symbol w(x) = Tr[rho U(x)]; real for Hermitian dequantizers."""
    value = _trace_product(_as_matrix(rho), U.eval(x))
    return _maybe_real(value, U.hermitian, U.label)


def sample_symbols(rho, U: DequantizerFamily, points: Sequence[tuple]) -> np.ndarray:
    """Symbols over a grid of label points; uses the scheme's fast path if any.

    ``rho`` may be any operator (raw ndarray or DensityMatrix); symbols of
    non-states are well defined, so no state validation happens here.
    """
    if U.sample is not None:
        if not isinstance(rho, DensityMatrix):
            rho = DensityMatrix(np.asarray(rho, dtype=complex), _validate=False)
        return U.sample(rho, points)
    vals = [symbol(rho, U, x) for x in points]
    return np.asarray(vals)


def reconstruct(samples: np.ndarray, Q: QuantizerFamily) -> np.ndarray:
    """Weighted quantizer sum sum_i weights_i samples_i Q(x_i) over the declared grid."""
    samples = np.asarray(samples)
    if samples.shape != (len(Q.points),):
        raise SchemeError(
            f"got {samples.shape[0] if samples.ndim else 0} samples for "
            f"{len(Q.points)} declared grid points of scheme {Q.label!r}"
        )
    if Q.reduce is not None:
        return Q.reduce(samples)
    acc = None
    for w, val, x in zip(Q.weights, samples, Q.points):
        c = w * val
        if c == 0.0:
            continue
        mat = Q.eval(x)
        acc = c * mat if acc is None else acc + c * mat
    if acc is None:  # zero symbol reconstructs the zero operator
        return np.zeros_like(Q.eval(Q.points[0]))
    return acc


def star_trace(rho1, rho2, U: DequantizerFamily, x: tuple) -> complex:
    """Symbol of the operator product: Tr[rho1 rho2 U(x)].

    Complex in general (rho1 rho2 is not Hermitian); real when the product
    happens to be, e.g. for commuting factors.
    """
    prod = _as_matrix(rho1) @ _as_matrix(rho2)
    return _trace_product(prod, U.eval(x))


# ---------------------------------------------------------------------------
# explicit symplectic kernels
# ---------------------------------------------------------------------------

def kernel_symplectic_quantum(x1: tuple, x2: tuple, x: tuple) -> KernelValue:
    """Quantum star-product kernel for symplectic tomograms.

    amplitude = 1/(4 pi^2) exp{(i/2)[(nu1 mu2 - nu2 mu1) + 2X1 + 2X2
                                       - 2(nu1 + nu2) X / nu]}
    delta_argument = mu (nu1 + nu2) - nu (mu1 + mu2); supported on nu != 0.
    """
    X1, mu1, nu1 = x1
    X2, mu2, nu2 = x2
    X, mu, nu = x
    if nu == 0:
        raise SingularSliceError("quantum symplectic kernel is not defined on the nu = 0 slice")
    phase = 0.5 * ((nu1 * mu2 - nu2 * mu1) + 2 * X1 + 2 * X2 - 2 * (nu1 + nu2) * X / nu)
    return KernelValue(
        amplitude=cmath.exp(1j * phase) / (4 * math.pi ** 2),
        delta_argument=mu * (nu1 + nu2) - nu * (mu1 + mu2),
    )


def kernel_symplectic_classical(x1: tuple, x2: tuple, x: tuple) -> KernelValue:
    """Commutative classical kernel: same delta support, phase without the
    antisymmetric cross term."""
    X1, mu1, nu1 = x1
    X2, mu2, nu2 = x2
    X, mu, nu = x
    if nu == 0:
        raise SingularSliceError("classical symplectic kernel is not defined on the nu = 0 slice")
    phase = X1 + X2 - X * (nu1 + nu2) / nu
    return KernelValue(
        amplitude=cmath.exp(1j * phase) / (4 * math.pi ** 2),
        delta_argument=nu * (mu1 + mu2) - mu * (nu1 + nu2),
    )


def kernel_relation_check(x1: tuple, x2: tuple, x: tuple) -> complex:
    """K_quantum / K_classical; contract: equals exp{i(mu2 nu1 - mu1 nu2)/2}."""
    kq = kernel_symplectic_quantum(x1, x2, x)
    kc = kernel_symplectic_classical(x1, x2, x)
    return kq.amplitude / kc.amplitude


# ---------------------------------------------------------------------------
# shipped schemes
# ---------------------------------------------------------------------------

def _symplectic_dequantizer_matrix(dim: int, x: tuple) -> np.ndarray:
    X, mu, nu = x
    r = math.hypot(mu, nu)
    if r == 0:
        raise SingularSliceError("(mu, nu) = (0, 0) labels no dequantizer")
    theta = math.atan2(nu, mu)
    psi = hermite_functions(np.array([X / r]), dim)[:, 0]
    v = np.exp(1j * theta * np.arange(dim)) * psi
    return np.outer(v, v.conj()) / r


def symplectic_scheme(
    dim: int,
    *,
    x_max: float = 38.0,
    n_x: int = 609,
    mu_max: float = 5.6,
    n_mu: int = 40,
) -> Scheme:
    """Symplectic scheme on the box X in [-x_max, x_max], (mu, nu) in [-mu_max, mu_max]^2.

    Dequantizer: delta(X - mu q - nu p) as a rank-one projector onto the
    rotated-quadrature eigenvector.  Quantizer: (1/2pi) e^{iX} D(gamma) with
    gamma = (nu - i mu)/sqrt2; X integrated with trapezoid weights, (mu, nu)
    with the midpoint rule on a cell-centered grid -- cell-centering keeps the
    label (mu, nu) = (0, 0), where the symbol degenerates to delta(X), off the
    grid.  The factored reducer integrates over X first (turning the samples
    into the characteristic function) and then accumulates one displacement
    per (mu, nu) node.

    By homogeneity a slice at radius r = hypot(mu, nu) spreads over X like
    r times the state's quadrature width, so x_max must stay a few state
    widths above sqrt(2) * mu_max * sigma_max; the defaults cover states with
    quadrature deviations up to ~1 (vacuum-scale and mildly excited states).

    Quantizer matrices are built in a working dimension dim + mu_max^2 + 4 and
    cropped: the truncated displacement at label radius r mangles its top
    ~|gamma|^2 = r^2/2 levels, and cropping from the enlarged space keeps that
    mess out of the reconstruction (term-wise cropping commutes with the
    quadrature sum, so the generic and factored paths agree).
    """
    if n_mu % 2:
        raise SchemeError("n_mu must be even so the cell-centered grid avoids (0, 0)")
    work_dim = dim + int(math.ceil(mu_max ** 2)) + 4
    xs = np.linspace(-x_max, x_max, n_x)
    step = 2.0 * mu_max / n_mu
    mus = -mu_max + step * (np.arange(n_mu) + 0.5)
    wx = np.full(n_x, xs[1] - xs[0])
    wx[0] *= 0.5
    wx[-1] *= 0.5
    wm = np.full(n_mu, step)

    points = _BoxPoints(xs, mus)
    weights = np.einsum("i,j,k->ijk", wx, wm, wm).reshape(-1)

    def q_eval(x: tuple) -> np.ndarray:
        X, mu, nu = x
        gamma = complex(nu, -mu) / math.sqrt(2.0)
        big = fock_core.displacement(gamma, work_dim)
        return cmath.exp(1j * X) / (2 * math.pi) * big[:dim, :dim]

    def q_reduce(samples: np.ndarray) -> np.ndarray:
        w = np.asarray(samples, dtype=complex).reshape(n_x, n_mu, n_mu)
        chi = np.einsum("i,ijk->jk", wx * np.exp(1j * xs), w)
        acc = np.zeros((work_dim, work_dim), dtype=complex)
        with warnings.catch_warnings():
            # work_dim carries the headroom the per-node warning asks for
            warnings.simplefilter("ignore", TruncationWarning)
            for j, mu in enumerate(mus):
                for k, nu in enumerate(mus):
                    c = wm[j] * wm[k] * chi[j, k]
                    if c == 0.0:
                        continue
                    acc += c * fock_core.displacement(
                        complex(nu, -mu) / math.sqrt(2.0), work_dim
                    )
        return acc[:dim, :dim] / (2 * math.pi)

    def q_tail(samples: np.ndarray) -> float:
        w = np.asarray(samples, dtype=complex).reshape(n_x, n_mu, n_mu)
        chi = np.abs(np.einsum("i,ijk->jk", wx * np.exp(1j * xs), w))
        edge = max(chi[0].max(), chi[-1].max(), chi[:, 0].max(), chi[:, -1].max())
        return float(edge)

    def _slice_values(rho_mat: np.ndarray, slice_xs: np.ndarray, mu: float, nu: float):
        r = math.hypot(mu, nu)
        if r == 0:
            raise SingularSliceError("(mu, nu) = (0, 0) labels no dequantizer")
        psi = hermite_functions(slice_xs / r, dim)
        pv = np.exp(1j * math.atan2(nu, mu) * np.arange(dim))[:, None] * psi
        return np.einsum("mj,mn,nj->j", pv.conj(), rho_mat, pv).real / r

    def u_sample(rho: DensityMatrix, pts) -> np.ndarray:
        if isinstance(pts, _BoxPoints):
            # native grid: one vectorized evaluation per (mu, nu) slice
            out = np.empty((pts.xs.size, pts.mus.size, pts.mus.size))
            for j, mu in enumerate(pts.mus):
                for k, nu in enumerate(pts.mus):
                    out[:, j, k] = _slice_values(rho.mat, pts.xs, float(mu), float(nu))
            return out.reshape(-1)
        # arbitrary point lists: group by (mu, nu) and vectorize within groups
        out = np.empty(len(pts))
        groups: dict[tuple, list[int]] = {}
        for i, (X, mu, nu) in enumerate(pts):
            groups.setdefault((mu, nu), []).append(i)
        for (mu, nu), idx in groups.items():
            slice_xs = np.array([pts[i][0] for i in idx])
            out[idx] = _slice_values(rho.mat, slice_xs, mu, nu)
        return out

    dequantizer = DequantizerFamily(
        label="symplectic",
        eval=lambda x: _symplectic_dequantizer_matrix(dim, x),
        hermitian=True,
        sample=u_sample,
    )
    quantizer = QuantizerFamily(
        label="symplectic",
        eval=q_eval,
        points=points,
        weights=weights,
        domain=f"X in [-{x_max}, {x_max}] ({n_x}), (mu, nu) in [-{mu_max}, {mu_max}]^2 ({n_mu}^2)",
        reduce=q_reduce,
        tail=q_tail,
    )
    return Scheme(dequantizer, quantizer)


def photon_scheme(cfg: ReconstructionConfig) -> Scheme:
    """Photon-number scheme: label points (n, alpha) on the configured disk grid.

    Dequantizer: displaced projector D(alpha)^H |n><n| D(alpha), whose symbol
    is the photon-number tomogram.  Quantizer: the s-ordered family of
    :func:`tomokit.photon_number.pn_quantizer`.
    """
    dim = cfg.dim
    ax = cfg.alpha_axis()
    w2 = cfg.alpha_weights()
    points = tuple(
        (int(n), complex(re, im)) for n in range(cfg.n_max + 1) for re in ax for im in ax
    )
    weights = np.tile(w2.reshape(-1), cfg.n_max + 1)

    def u_eval(x: tuple) -> np.ndarray:
        n, alpha = x
        D = fock_core.displacement(alpha, dim)
        v = D.conj().T[:, int(n)]
        return np.outer(v, v.conj())

    def u_sample(rho: DensityMatrix, pts) -> np.ndarray:
        cache: dict[complex, np.ndarray] = {}
        out = np.empty(len(pts))
        worst = max(abs(complex(alpha)) for _, alpha in pts)
        if worst ** 2 > dim / 4:
            warnings.warn(
                f"alpha grid reaches |alpha|^2 = {worst ** 2:.1f}, large for dimension {dim}",
                TruncationWarning,
                stacklevel=3,
            )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            for i, (n, alpha) in enumerate(pts):
                alpha = complex(alpha)
                probs = cache.get(alpha)
                if probs is None:
                    D = fock_core.displacement(alpha, dim)
                    probs = np.real(np.einsum("na,ab,nb->n", D, rho.mat, D.conj()))
                    cache[alpha] = probs
                out[i] = probs[int(n)]
        return out

    def q_eval(x: tuple) -> np.ndarray:
        n, alpha = x
        return photon_number.pn_quantizer(int(n), alpha, cfg)

    def q_reduce(samples: np.ndarray) -> np.ndarray:
        omega = photon_number.PhotonTomogram(
            values=np.asarray(samples, dtype=float).reshape(cfg.n_max + 1, ax.size, ax.size),
            re_alphas=ax,
            im_alphas=ax,
        )
        return photon_number.pn_reconstruct(omega, cfg, divergence_guard=False)

    def q_tail(samples: np.ndarray) -> float:
        vals = np.asarray(samples, dtype=float).reshape(cfg.n_max + 1, ax.size, ax.size)
        ring = np.hypot(*np.meshgrid(ax, ax, indexing="ij")) >= cfg.alpha_radius - (ax[1] - ax[0])
        tinv = np.abs(cfg.t ** (-np.arange(cfg.n_max + 1.0)))
        return float(np.einsum("n,nij->", tinv, np.abs(vals) * ring[None, :, :])
                     / max(ring.sum(), 1) * math.pi * cfg.alpha_radius ** 2)

    dequantizer = DequantizerFamily(
        label="photon-number", eval=u_eval, hermitian=True, sample=u_sample
    )
    quantizer = QuantizerFamily(
        label="photon-number",
        eval=q_eval,
        points=points,
        weights=weights,
        domain=(
            f"n in 0..{cfg.n_max}, alpha on a {cfg.n_alpha}x{cfg.n_alpha} square grid "
            f"clipped to the disk |alpha| <= {cfg.alpha_radius}"
        ),
        reduce=q_reduce,
        tail=q_tail,
    )
    return Scheme(dequantizer, quantizer)
