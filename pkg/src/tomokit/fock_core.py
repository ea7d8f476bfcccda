"""Truncated Fock-space linear algebra: operators, states, validity checks.

Everything lives in the basis {|0>, ..., |N-1>} with hbar = 1 and the
quadrature convention q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)),
so the vacuum has <q^2> = <p^2> = 1/2.

Operators are plain complex ndarrays; density operators are wrapped in
:class:`DensityMatrix`, which validates Hermiticity, unit trace and spectral
positivity on construction and carries truncation bookkeeping.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .errors import DimensionError, DomainError, TruncationWarning

__all__ = [
    "PhasePoint",
    "DensityMatrix",
    "ladder",
    "number_op",
    "quadratures",
    "parity",
    "displacement",
    "displacement_elements",
    "squeeze",
    "fock_state",
    "coherent_state",
    "thermal_state",
    "squeezed_vacuum_state",
    "make_state",
    "truncation_leakage",
    "fidelity",
]

#: default tolerance for algebraic identities
TOL_ALGEBRAIC = 1e-10
#: default tolerance for quadrature-based results
TOL_QUADRATURE = 1e-6

_HERM_TOL = 1e-12
_TRACE_TOL = 1e-10
_EIG_TOL = 1e-10
_RENORM_WARN = 1e-6


def _check_dim(dim: int) -> int:
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise DimensionError(f"truncation dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


@dataclass(frozen=True)
class PhasePoint:
    """Point (q, p) of the dimensionless phase plane; beta = (q + ip)/sqrt(2)."""

    q: float
    p: float

    @property
    def beta(self) -> complex:
        return complex(self.q, self.p) / math.sqrt(2.0)


def truncation_leakage(mat: np.ndarray) -> float:
    """Probability weight outside the lower 75% of the retained levels.

    Acts as the toolkit's accuracy proxy: states whose support creeps into
    the top quarter of the basis are not trustworthy under truncation.
    """
    dim = mat.shape[0]
    keep = int(math.ceil(0.75 * dim))
    pop = np.real(np.diagonal(mat))
    return float(1.0 - pop[:keep].sum() / max(pop.sum(), 1e-300))


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density operator on the truncated Fock space.

    ``trace_correction`` records how far the raw construction was from unit
    trace before renormalization; corrections above 1e-6 set ``warned`` and
    emit a :class:`TruncationWarning`.
    """

    mat: np.ndarray
    trace_correction: float = 0.0
    warned: bool = False
    _validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {mat.shape}")
        _check_dim(mat.shape[0])
        object.__setattr__(self, "mat", mat)
        if not self._validate:
            return
        herm = np.abs(mat - mat.conj().T).max()
        if herm > _HERM_TOL:
            raise DomainError(f"density matrix not Hermitian: max asymmetry {herm:.3e}")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > _TRACE_TOL:
            raise DomainError(f"density matrix trace {tr!r} not 1 within {_TRACE_TOL}")
        lam_min = float(np.linalg.eigvalsh(mat).min())
        if lam_min < -_EIG_TOL:
            raise DomainError(f"density matrix has negative eigenvalue {lam_min:.3e}")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def leakage(self) -> float:
        return truncation_leakage(self.mat)

    def expect(self, op: np.ndarray) -> complex:
        return complex(np.trace(self.mat @ op))

    def purity(self) -> float:
        return float(np.trace(self.mat @ self.mat).real)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "re": self.mat.real.tolist(),
            "im": self.mat.imag.tolist(),
        }

    @classmethod
    def from_json_dict(cls, payload: dict, validate: bool = True) -> "DensityMatrix":
        mat = np.asarray(payload["re"], dtype=float) + 1j * np.asarray(payload["im"], dtype=float)
        if mat.shape != (payload["dim"], payload["dim"]):
            raise DimensionError("declared dim does not match matrix payload")
        return cls(mat, _validate=validate)


def _finalize_state(mat: np.ndarray, warn_label: str) -> DensityMatrix:
    """Renormalize the trace after truncation and flag large corrections."""
    tr = np.trace(mat).real
    if tr <= 0:
        raise DomainError(f"{warn_label}: construction lost all weight under truncation")
    correction = abs(1.0 - tr)
    warned = correction > _RENORM_WARN
    if warned:
        warnings.warn(
            f"{warn_label}: trace renormalization {correction:.3e} exceeds {_RENORM_WARN}",
            TruncationWarning,
            stacklevel=3,
        )
    return DensityMatrix((mat + mat.conj().T) / (2 * tr), trace_correction=correction, warned=warned)


# ---------------------------------------------------------------------------
# operator constructors
# ---------------------------------------------------------------------------

def ladder(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation operators: a|n> = sqrt(n)|n-1>, a_dag = a^H."""
    dim = _check_dim(dim)
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return a, a.conj().T


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(_check_dim(dim), dtype=float)).astype(complex)


def quadratures(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Position and momentum, q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2))."""
    a, ad = ladder(dim)
    q = (a + ad) / math.sqrt(2.0)
    p = (a - ad) / (1j * math.sqrt(2.0))
    return q, p


def parity(dim: int) -> np.ndarray:
    """(-1)^(a^dag a): diagonal with entries (-1)^n."""
    dim = _check_dim(dim)
    return np.diag((-1.0) ** np.arange(dim)).astype(complex)


def _warn_near_truncation(alpha: complex, dim: int, what: str) -> None:
    if abs(alpha) ** 2 > dim / 4:
        warnings.warn(
            f"{what}: |alpha|^2 = {abs(alpha)**2:.2f} is large for dimension {dim}; "
            "matrix elements near the truncation edge are unreliable",
            TruncationWarning,
            stacklevel=3,
        )


def displacement(alpha: complex, dim: int) -> np.ndarray:
    """Displacement operator exp(alpha a^dag - alpha* a) on the truncated space.

    Built by scaling-and-squaring matrix exponential of the (exactly
    anti-Hermitian) truncated generator, so the result is unitary to machine
    precision at every dimension.  Its interior matrix elements agree with the
    exact infinite-dimensional ones from :func:`displacement_elements`; the
    two routes cross-check each other in the test suite.
    """
    dim = _check_dim(dim)
    alpha = complex(alpha)
    if alpha == 0:
        return np.eye(dim, dtype=complex)
    _warn_near_truncation(alpha, dim, "displacement")
    a, ad = ladder(dim)
    return expm(alpha * ad - np.conj(alpha) * a)


def displacement_elements(alpha: complex, dim: int) -> np.ndarray:
    """Exact matrix elements <m|exp(alpha a^dag - alpha* a)|n>, truncated.

    Closed form via associated Laguerre polynomials,

        <m|D|n> = sqrt(n!/m!) alpha^(m-n) e^(-|alpha|^2/2) L_n^(m-n)(|alpha|^2),  m >= n,

    with the m < n block fixed by D(-alpha) = D(alpha)^H.  This is the
    analytic oracle route: entries are exact, but the matrix is *not* unitary
    near the truncation corner (the top columns leak weight upward), so
    :func:`displacement` is the production constructor.
    """
    dim = _check_dim(dim)
    alpha = complex(alpha)
    if alpha == 0:
        return np.eye(dim, dtype=complex)
    _warn_near_truncation(alpha, dim, "displacement_elements")
    x = abs(alpha) ** 2
    idx = np.arange(dim, dtype=float)
    m = idx[:, None]
    n = idx[None, :]
    lo = np.minimum(m, n)
    delta = np.abs(m - n)
    logmag = 0.5 * (gammaln(lo + 1) - gammaln(lo + delta + 1)) + delta * math.log(abs(alpha)) - x / 2
    lag = eval_genlaguerre(lo, delta, x)
    u = alpha / abs(alpha)
    phase = np.where(m >= n, u ** delta, (-np.conj(u)) ** delta)
    return np.exp(logmag) * lag * phase


def squeeze(r: float, dim: int) -> np.ndarray:
    """Single-mode squeeze exp[(r/2)(a^2 - a^dag^2)]; shrinks sigma_qq by e^(-2r)."""
    dim = _check_dim(dim)
    a, ad = ladder(dim)
    return expm((r / 2.0) * (a @ a - ad @ ad))


# ---------------------------------------------------------------------------
# state constructors
# ---------------------------------------------------------------------------

def fock_state(n: int, dim: int) -> DensityMatrix:
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise DomainError(f"Fock index n={n} outside 0..{dim - 1}")
    mat = np.zeros((dim, dim), dtype=complex)
    mat[n, n] = 1.0
    return DensityMatrix(mat)


def coherent_state(alpha: complex, dim: int) -> DensityMatrix:
    """|alpha><alpha| with amplitudes e^(-|a|^2/2) alpha^n / sqrt(n!), renormalized."""
    dim = _check_dim(dim)
    alpha = complex(alpha)
    ns = np.arange(dim)
    if alpha == 0:
        return fock_state(0, dim)
    logmag = ns * math.log(abs(alpha)) - 0.5 * gammaln(ns + 1) - abs(alpha) ** 2 / 2
    vec = np.exp(logmag) * np.exp(1j * ns * np.angle(alpha))
    tail = 1.0 - float(np.vdot(vec, vec).real)
    if tail > 1e-8:
        warnings.warn(
            f"coherent_state: truncated weight {tail:.3e} above 1e-8 for alpha={alpha}, N={dim}",
            TruncationWarning,
            stacklevel=2,
        )
    return _finalize_state(np.outer(vec, vec.conj()), "coherent_state")


def thermal_state(nbar: float, dim: int) -> DensityMatrix:
    """Thermal state, diagonal nbar^n / (nbar+1)^(n+1), renormalized after truncation."""
    dim = _check_dim(dim)
    if nbar < 0:
        raise DomainError(f"mean photon number must be >= 0, got {nbar}")
    if nbar == 0:
        return fock_state(0, dim)
    ns = np.arange(dim)
    logp = ns * (math.log(nbar) - math.log(nbar + 1)) - math.log(nbar + 1)
    diag = np.exp(logp)
    tail = 1.0 - diag.sum()
    if tail > 1e-8:
        warnings.warn(
            f"thermal_state: truncated weight {tail:.3e} above 1e-8 for nbar={nbar}, N={dim}",
            TruncationWarning,
            stacklevel=2,
        )
    return _finalize_state(np.diag(diag).astype(complex), "thermal_state")


def squeezed_vacuum_state(r: float, dim: int) -> DensityMatrix:
    """Squeezed vacuum S(r)|0>, even amplitudes (-tanh r)^k sqrt((2k)!)/(2^k k!)/sqrt(cosh r)."""
    dim = _check_dim(dim)
    vec = np.zeros(dim, dtype=complex)
    th = math.tanh(r)
    ks = np.arange((dim + 1) // 2)
    if r == 0:
        return fock_state(0, dim)
    logmag = 0.5 * gammaln(2 * ks + 1) - ks * math.log(2.0) - gammaln(ks + 1) \
        + ks * math.log(abs(th)) - 0.5 * math.log(math.cosh(r))
    amps = np.exp(logmag) * np.where(ks % 2 == 0, 1.0, -np.sign(th))
    vec[2 * ks] = amps
    tail = 1.0 - float(np.vdot(vec, vec).real)
    if tail > 1e-8:
        warnings.warn(
            f"squeezed_vacuum_state: truncated weight {tail:.3e} above 1e-8 for r={r}, N={dim}",
            TruncationWarning,
            stacklevel=2,
        )
    return _finalize_state(np.outer(vec, vec.conj()), "squeezed_vacuum_state")


_STATE_KINDS = ("vacuum", "fock", "coherent", "thermal", "squeezed_vacuum")


def make_state(kind: str, param=None, *, dim: int) -> DensityMatrix:
    """Dispatch constructor: kind in {vacuum, fock, coherent, thermal, squeezed_vacuum}."""
    kind = kind.lower()
    if kind == "vacuum":
        return fock_state(0, dim)
    if kind == "fock":
        return fock_state(int(param), dim)
    if kind == "coherent":
        return coherent_state(complex(param), dim)
    if kind == "thermal":
        return thermal_state(float(param), dim)
    if kind == "squeezed_vacuum":
        return squeezed_vacuum_state(float(param), dim)
    raise DomainError(f"unknown state kind {kind!r}; expected one of {_STATE_KINDS}")


# ---------------------------------------------------------------------------
# comparisons
# ---------------------------------------------------------------------------

def _sqrtm_psd(mat: np.ndarray) -> np.ndarray:
    lam, vec = np.linalg.eigh(mat)
    lam = np.clip(lam, 0.0, None)
    return (vec * np.sqrt(lam)) @ vec.conj().T


def fidelity(rho: DensityMatrix | np.ndarray, sigma: DensityMatrix | np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Negative eigenvalues from numerical noise are clipped; for a pure rho this
    reduces to <psi|sigma|psi>.
    """
    r = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho)
    s = sigma.mat if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    if r.shape != s.shape:
        raise DimensionError(f"fidelity: shape mismatch {r.shape} vs {s.shape}")
    sq = _sqrtm_psd(r)
    lam = np.linalg.eigvalsh(sq @ s @ sq)
    return float(np.sqrt(np.clip(lam, 0.0, None)).sum() ** 2)
