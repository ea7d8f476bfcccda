"""Two-variable Hermite polynomials H^R_{n1,n2}(y1, y2).

Defined through the generating function

    exp(-1/2 x^T R x + y^T R x) = sum_{n1,n2} x1^n1 x2^n2 / (n1! n2!) H^R_{n1 n2}(y1, y2)

for a complex symmetric 2x2 matrix R.  Differentiating the generating
function once in x1 (or x2) yields the raising recurrences

    H_{n1+1,n2} = (R11 y1 + R12 y2) H_{n1,n2} - n1 R11 H_{n1-1,n2} - n2 R12 H_{n1,n2-1}
    H_{n1,n2+1} = (R21 y1 + R22 y2) H_{n1,n2} - n2 R22 H_{n1,n2-1} - n1 R21 H_{n1-1,n2}

with H_00 = 1, which is how values are computed here (validated against the
exact series expansion in the test suite).

Diagonal values H_nn grow roughly like n! and overflow doubles near n ~ 150,
so the lattice is stored in a scaled representation ``mantissa * 2**exponent``
with the mantissa renormalized whenever it leaves [2^-512, 2^512].  Use
:meth:`HermiteContext.eval_scaled` (or :func:`hermite2_log_abs`) when the
plain complex value may not fit in a double.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

__all__ = ["HermiteContext", "hermite2", "hermite2_log_abs"]

_RENORM = 2.0 ** 512
_LN2 = math.log(2.0)


def _normalize(mant: complex, exp2: int) -> tuple[complex, int]:
    m = abs(mant)
    if m == 0.0:
        return 0j, 0
    while m >= _RENORM:
        mant /= _RENORM
        m /= _RENORM
        exp2 += 512
    while m < 1.0 / _RENORM:
        mant *= _RENORM
        m *= _RENORM
        exp2 -= 512
    return mant, exp2


def _add(a: tuple[complex, int], b: tuple[complex, int]) -> tuple[complex, int]:
    (ma, ea), (mb, eb) = a, b
    if ma == 0:
        return b
    if mb == 0:
        return a
    if ea < eb:
        (ma, ea), (mb, eb) = (mb, eb), (ma, ea)
    shift = eb - ea
    if shift < -1074:          # addend vanishes at double precision
        return ma, ea
    return _normalize(ma + mb * 2.0 ** shift, ea)


class HermiteContext:
    """Evaluator for a fixed symmetric matrix R with per-argument memoization.

    The memo table maps (y1, y2) to the filled (n1, n2) lattice; recomputation
    from scratch always reproduces the stored entries.  Instances are cheap;
    confine each one to a single thread of execution.
    """

    def __init__(self, R):
        R = np.asarray(R, dtype=complex)
        if R.shape != (2, 2):
            raise DomainError(f"R must be 2x2, got shape {R.shape}")
        if R[0, 1] != R[1, 0]:
            raise DomainError("R must be symmetric: R12 == R21 exactly")
        self.R = R
        self._tables: dict[tuple[complex, complex], list[list[tuple[complex, int]]]] = {}

    def _lattice(self, y1: complex, y2: complex, n1: int, n2: int):
        key = (y1, y2)
        table = self._tables.get(key)
        if table is not None and len(table) > n1 and len(table[0]) > n2:
            return table
        r11, r12 = self.R[0, 0], self.R[0, 1]
        r22 = self.R[1, 1]
        c1 = r11 * y1 + r12 * y2
        c2 = r12 * y1 + r22 * y2
        zero = (0j, 0)
        t = [[zero] * (n2 + 1) for _ in range(n1 + 1)]
        t[0][0] = (1.0 + 0j, 0)
        for i in range(n1):
            below = t[i - 1][0] if i >= 1 else zero
            t[i + 1][0] = _add(
                (c1 * t[i][0][0], t[i][0][1]),
                (-i * r11 * below[0], below[1]),
            )
        for j in range(n2):
            for i in range(n1 + 1):
                prev = t[i][j - 1] if j >= 1 else zero
                left = t[i - 1][j] if i >= 1 else zero
                term = (c2 * t[i][j][0], t[i][j][1])
                term = _add(term, (-j * r22 * prev[0], prev[1]))
                term = _add(term, (-i * r12 * left[0], left[1]))
                t[i][j + 1] = _normalize(*term)
        self._tables[key] = t
        return t

    def eval_scaled(self, n1: int, n2: int, y1: complex, y2: complex) -> tuple[complex, int]:
        """H_{n1,n2}(y1, y2) as (mantissa, exp2) with value = mantissa * 2**exp2."""
        if n1 < 0 or n2 < 0:
            raise DomainError(f"indices must be nonnegative, got ({n1}, {n2})")
        t = self._lattice(complex(y1), complex(y2), int(n1), int(n2))
        return t[n1][n2]

    def eval(self, n1: int, n2: int, y1: complex, y2: complex) -> complex:
        """Plain complex value; overflows to inf for very large indices."""
        mant, exp2 = self.eval_scaled(n1, n2, y1, y2)
        if mant == 0:
            return 0j
        if exp2 > 2000:
            return complex(math.inf, math.inf)
        return mant * 2.0 ** exp2


def hermite2(R, n1: int, n2: int, y1: complex, y2: complex) -> complex:
    """One-shot evaluation without keeping a context around."""
    return HermiteContext(R).eval(n1, n2, y1, y2)


def hermite2_log_abs(scaled: tuple[complex, int]) -> tuple[float, complex]:
    """Split a scaled value into (log|H|, phase); log is -inf for H = 0."""
    mant, exp2 = scaled
    m = abs(mant)
    if m == 0.0:
        return -math.inf, 1.0 + 0j
    return math.log(m) + exp2 * _LN2, mant / m
