"""NumPy reference implementations of the hot kernels.

Kept algorithmically identical to the Cython versions in ``_fast.pyx`` so the
two backends agree to floating-point noise; the test suite checks that.
"""

from __future__ import annotations

import numpy as np

_PI_QUARTER = np.pi ** -0.25


def hermite_functions(x: np.ndarray, nmax: int) -> np.ndarray:
    """Harmonic-oscillator eigenfunctions psi_0..psi_{nmax-1} at the points x.

    Uses the normalized upward recurrence

        psi_{n+1}(x) = sqrt(2/(n+1)) x psi_n(x) - sqrt(n/(n+1)) psi_{n-1}(x)

    on the functions themselves (Gaussian factor included), which stays
    bounded for large n where the bare Hermite polynomials overflow.

    Returns an array of shape ``(nmax, len(x))``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax, x.size))
    out[0] = _PI_QUARTER * np.exp(-0.5 * x * x)
    if nmax > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, nmax - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1.0)) * out[n - 1]
    return out


def _bspline_weights(u: np.ndarray):
    # cubic B-spline basis on the 4-point stencil, u in [0, 1)
    u2 = u * u
    u3 = u2 * u
    return (
        (1.0 - u) ** 3 / 6.0,
        (4.0 - 6.0 * u2 + 3.0 * u3) / 6.0,
        (1.0 + 3.0 * u + 3.0 * u2 - 3.0 * u3) / 6.0,
        u3 / 6.0,
    )


def bspline_line_sums(
    coef: np.ndarray,
    base_q: np.ndarray,
    base_p: np.ndarray,
    dir_q: float,
    dir_p: float,
    t0: float,
    dt: float,
    nt: int,
    origin_q: float,
    step_q: float,
    origin_p: float,
    step_p: float,
) -> np.ndarray:
    """Accumulate sum_k f(base_i + t_k * dir) * dt along one line per base point.

    ``coef`` holds cubic B-spline coefficients of the sampled surface
    (``scipy.ndimage.spline_filter`` output).  Points outside the grid
    contribute zero; stencil indices are clamped at the edges, which matches
    a mirror boundary well enough for surfaces that decay to ~0 there.
    """
    coef = np.asarray(coef, dtype=float)
    nq, npp = coef.shape
    ts = t0 + dt * np.arange(nt)
    qi = (base_q[:, None] + ts[None, :] * dir_q - origin_q) / step_q
    pi = (base_p[:, None] + ts[None, :] * dir_p - origin_p) / step_p

    inside = (qi >= 0.0) & (qi <= nq - 1.0) & (pi >= 0.0) & (pi <= npp - 1.0)
    qi = np.clip(qi, 0.0, nq - 1.0)
    pi = np.clip(pi, 0.0, npp - 1.0)
    fq = np.minimum(qi.astype(np.intp), nq - 2) if nq > 1 else qi.astype(np.intp)
    fp = np.minimum(pi.astype(np.intp), npp - 2) if npp > 1 else pi.astype(np.intp)
    wq = _bspline_weights(qi - fq)
    wp = _bspline_weights(pi - fp)

    vals = np.zeros_like(qi)
    for a in range(4):
        iq = np.clip(fq + a - 1, 0, nq - 1)
        row = np.zeros_like(qi)
        for b in range(4):
            ip = np.clip(fp + b - 1, 0, npp - 1)
            row += wp[b] * coef[iq, ip]
        vals += wq[a] * row
    vals[~inside] = 0.0
    return vals.sum(axis=1) * dt
