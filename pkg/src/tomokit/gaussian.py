"""Single-mode Gaussian states: covariance representation and Fock embedding.

A Gaussian state is a snapshot (<q>, <p>, sigma) with the real symmetric
quadrature covariance sigma = [[sigma_qq, sigma_pq], [sigma_pq, sigma_pp]].
The vacuum has sigma_qq = sigma_pp = 1/2.  No dynamics: any time argument of
an evolving covariance is treated as an opaque label by the caller.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import fock_core
from .errors import DomainError, TruncationWarning
from .fock_core import DensityMatrix

__all__ = ["GaussianState", "GaussianMoments", "moments", "wigner_eval", "to_fock"]

_PHYS_TOL = 1e-12


@dataclass(frozen=True)
class GaussianState:
    """Means and quadrature covariance of a one-mode Gaussian state (hbar = 1)."""

    mean_q: float = 0.0
    mean_p: float = 0.0
    sigma_qq: float = 0.5
    sigma_pp: float = 0.5
    sigma_pq: float = 0.0

    def __post_init__(self):
        if self.sigma_qq <= 0 or self.sigma_pp <= 0:
            raise DomainError("diagonal variances must be positive")
        d = self.sigma_qq * self.sigma_pp - self.sigma_pq ** 2
        if d <= 0:
            raise DomainError(f"covariance must be positive definite, det = {d:.3e}")
        if d < 0.25 - _PHYS_TOL:
            raise DomainError(
                f"covariance violates the uncertainty bound: det sigma = {d:.6f} < 1/4"
            )

    # -- common families -------------------------------------------------
    @classmethod
    def vacuum(cls) -> "GaussianState":
        return cls()

    @classmethod
    def coherent(cls, alpha: complex) -> "GaussianState":
        alpha = complex(alpha)
        return cls(mean_q=math.sqrt(2) * alpha.real, mean_p=math.sqrt(2) * alpha.imag)

    @classmethod
    def thermal(cls, nbar: float) -> "GaussianState":
        if nbar < 0:
            raise DomainError(f"mean photon number must be >= 0, got {nbar}")
        v = nbar + 0.5
        return cls(sigma_qq=v, sigma_pp=v)

    @classmethod
    def squeezed_vacuum(cls, r: float) -> "GaussianState":
        return cls(sigma_qq=math.exp(-2 * r) / 2, sigma_pp=math.exp(2 * r) / 2)

    @classmethod
    def displaced_squeezed_thermal(cls, alpha: complex, r: float, nbar: float) -> "GaussianState":
        alpha = complex(alpha)
        v = nbar + 0.5
        return cls(
            mean_q=math.sqrt(2) * alpha.real,
            mean_p=math.sqrt(2) * alpha.imag,
            sigma_qq=v * math.exp(-2 * r),
            sigma_pp=v * math.exp(2 * r),
        )

    def to_json_dict(self) -> dict:
        return {
            "mean_q": self.mean_q,
            "mean_p": self.mean_p,
            "sigma_qq": self.sigma_qq,
            "sigma_pp": self.sigma_pp,
            "sigma_pq": self.sigma_pq,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "GaussianState":
        return cls(**{k: float(payload[k]) for k in
                      ("mean_q", "mean_p", "sigma_qq", "sigma_pp", "sigma_pq")})


@dataclass(frozen=True)
class GaussianMoments:
    """Derived covariance invariants: d = det sigma, T = tr sigma, L = 1 + 2T + 4d."""

    d: float
    T: float
    L: float


def moments(g: GaussianState) -> GaussianMoments:
    d = g.sigma_qq * g.sigma_pp - g.sigma_pq ** 2
    T = g.sigma_qq + g.sigma_pp
    return GaussianMoments(d=d, T=T, L=1.0 + 2.0 * T + 4.0 * d)


def wigner_eval(g: GaussianState, q, p):
    """Wigner function (1/sqrt(det sigma)) exp(-1/2 Q sigma^-1 Q^T), Q = (p-<p>, q-<q>).

    Normalized so that (1/2pi) integral W dq dp = 1; accepts scalars or
    broadcastable arrays for q and p.
    """
    d = g.sigma_qq * g.sigma_pp - g.sigma_pq ** 2
    dq = np.asarray(q, dtype=float) - g.mean_q
    dp = np.asarray(p, dtype=float) - g.mean_p
    quad = (g.sigma_qq * dp ** 2 - 2.0 * g.sigma_pq * dp * dq + g.sigma_pp * dq ** 2) / d
    out = np.exp(-0.5 * quad) / math.sqrt(d)
    return float(out) if out.ndim == 0 else out


def to_fock(g: GaussianState, dim: int) -> DensityMatrix:
    """Embed a composable Gaussian state into the truncated Fock basis.

    Supported family: sigma_pq = 0, realized as D(alpha) S(r) rho_thermal
    S(r)^H D(alpha)^H with nbar = sqrt(det sigma) - 1/2 and
    r = (1/4) ln(sigma_pp / sigma_qq).  This covers every state the analytic
    photon-statistics branch is validated against; rotated covariances are out
    of scope.
    """
    if abs(g.sigma_pq) > _PHYS_TOL:
        raise DomainError(
            "to_fock supports only sigma_pq = 0 (displaced/squeezed thermal family); "
            f"got sigma_pq = {g.sigma_pq}"
        )
    mom = moments(g)
    nbar = max(math.sqrt(mom.d) - 0.5, 0.0)
    r = 0.25 * math.log(g.sigma_pp / g.sigma_qq)
    alpha = complex(g.mean_q, g.mean_p) / math.sqrt(2.0)

    rho = fock_core.thermal_state(nbar, dim).mat if nbar > 0 else fock_core.fock_state(0, dim).mat
    if r != 0.0:
        S = fock_core.squeeze(r, dim)
        rho = S @ rho @ S.conj().T
    if alpha != 0:
        D = fock_core.displacement(alpha, dim)
        rho = D @ rho @ D.conj().T
    state = DensityMatrix(rho / np.trace(rho).real)
    if state.leakage > 1e-8:
        warnings.warn(
            f"to_fock: truncation leakage {state.leakage:.3e} above 1e-8 at N={dim}",
            TruncationWarning,
            stacklevel=2,
        )
    return state
