# Builds the optional compiled eigensolver core. The package falls back to
# the pure NumPy implementation in landauer_lab._jacobi_py when the extension
# is unavailable, so a failed compile is not fatal to `pip install`.

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # source dist without cython: install pure-python only
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "landauer_lab._jacobi",
                ["src/landauer_lab/_jacobi.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off keeps the compiled sweep numerically
                # aligned with the pure fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
