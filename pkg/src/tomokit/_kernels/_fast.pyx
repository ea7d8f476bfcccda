# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels; semantics match tomokit._kernels._ref exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()

cdef double _PI_QUARTER = 0.7511255444649425  # pi ** -0.25


def hermite_functions(x, Py_ssize_t nmax):
    """Oscillator eigenfunctions psi_0..psi_{nmax-1} at points x, shape (nmax, len(x))."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t npts = xa.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((nmax, npts))
    cdef double[:, ::1] psi = out
    cdef double[::1] xv = xa
    cdef Py_ssize_t j, n
    cdef double xj
    for j in range(npts):
        xj = xv[j]
        psi[0, j] = _PI_QUARTER * exp(-0.5 * xj * xj)
    if nmax > 1:
        for j in range(npts):
            psi[1, j] = sqrt(2.0) * xv[j] * psi[0, j]
    for n in range(1, nmax - 1):
        for j in range(npts):
            psi[n + 1, j] = sqrt(2.0 / (n + 1)) * xv[j] * psi[n, j] \
                - sqrt(n / (n + 1.0)) * psi[n - 1, j]
    return out


def bspline_line_sums(coef, base_q, base_p, double dir_q, double dir_p,
                      double t0, double dt, Py_ssize_t nt,
                      double origin_q, double step_q, double origin_p, double step_p):
    """Line-integral sums over a cubic-B-spline surface; see _ref for the contract."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] c = np.ascontiguousarray(coef, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bq = np.ascontiguousarray(base_q, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bp = np.ascontiguousarray(base_p, dtype=np.float64)
    cdef Py_ssize_t nlines = bq.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(nlines)
    cdef double[:, ::1] cv = c
    cdef double[::1] bqv = bq, bpv = bp, ov = out
    cdef Py_ssize_t nq = c.shape[0], npp = c.shape[1]
    cdef Py_ssize_t i, k, a, b, fq, fp, iq, ip
    cdef double t, qi, pi, uq, up, acc, row, val
    cdef double wq0, wq1, wq2, wq3, wp0, wp1, wp2, wp3, u2, u3

    for i in range(nlines):
        acc = 0.0
        for k in range(nt):
            t = t0 + dt * k
            qi = (bqv[i] + t * dir_q - origin_q) / step_q
            pi = (bpv[i] + t * dir_p - origin_p) / step_p
            if qi < 0.0 or qi > nq - 1.0 or pi < 0.0 or pi > npp - 1.0:
                continue
            fq = <Py_ssize_t> qi
            if fq > nq - 2:
                fq = nq - 2
            fp = <Py_ssize_t> pi
            if fp > npp - 2:
                fp = npp - 2
            uq = qi - fq
            up = pi - fp
            u2 = uq * uq
            u3 = u2 * uq
            wq0 = (1.0 - uq) * (1.0 - uq) * (1.0 - uq) / 6.0
            wq1 = (4.0 - 6.0 * u2 + 3.0 * u3) / 6.0
            wq2 = (1.0 + 3.0 * uq + 3.0 * u2 - 3.0 * u3) / 6.0
            wq3 = u3 / 6.0
            u2 = up * up
            u3 = u2 * up
            wp0 = (1.0 - up) * (1.0 - up) * (1.0 - up) / 6.0
            wp1 = (4.0 - 6.0 * u2 + 3.0 * u3) / 6.0
            wp2 = (1.0 + 3.0 * up + 3.0 * u2 - 3.0 * u3) / 6.0
            wp3 = u3 / 6.0

            val = 0.0
            for a in range(4):
                iq = fq + a - 1
                if iq < 0:
                    iq = 0
                elif iq > nq - 1:
                    iq = nq - 1
                row = 0.0
                b = fp - 1
                ip = b if b >= 0 else 0
                row += wp0 * cv[iq, ip]
                ip = fp
                row += wp1 * cv[iq, ip]
                ip = fp + 1 if fp + 1 <= npp - 1 else npp - 1
                row += wp2 * cv[iq, ip]
                ip = fp + 2 if fp + 2 <= npp - 1 else npp - 1
                row += wp3 * cv[iq, ip]
                if a == 0:
                    val += wq0 * row
                elif a == 1:
                    val += wq1 * row
                elif a == 2:
                    val += wq2 * row
                else:
                    val += wq3 * row
            acc += val
        ov[i] = acc * dt
    return out
