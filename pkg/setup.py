import numpy
from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tomokit._kernels._fast",
                ["src/tomokit/_kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-Python fallback backend is selected at import time; the package
    # works without the compiled extension.
    ext_modules = []

setup(ext_modules=ext_modules)
