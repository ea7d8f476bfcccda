"""Hot numerical kernels with a compiled core and a pure-NumPy fallback.

Two kernels dominate runtime across the toolkit: batched evaluation of the
harmonic-oscillator eigenfunctions over sample grids, and line-integral
sampling of cubic-B-spline-filtered phase-space grids (the forward Radon
transform). Both exist twice with identical semantics:

* ``tomokit._kernels._fast`` -- Cython extension, built by setup.py
* ``tomokit._kernels._ref``  -- vectorized NumPy reference implementation

The compiled module is preferred when importable.  Set the environment
variable ``TOMOKIT_PURE_PYTHON=1`` to force the NumPy backend (useful for
debugging and for the backend-comparison benchmark).
"""

import os

from . import _ref

if os.environ.get("TOMOKIT_PURE_PYTHON", "").strip().lower() in ("1", "true", "yes"):
    _impl = _ref
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _ref
        BACKEND = "python"

hermite_functions = _impl.hermite_functions
bspline_line_sums = _impl.bspline_line_sums

__all__ = ["BACKEND", "hermite_functions", "bspline_line_sums", "_ref"]
