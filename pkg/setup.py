"""Build script for the optional compiled lattice kernels.

The package is fully functional without the extension (a pure-numpy
backend is selected at import time); building it just makes the loss
kernels much faster.  Set TDTLAB_SKIP_EXT=1 to install without compiling.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("TDTLAB_SKIP_EXT", "") not in ("1", "true", "yes"):
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tdtlab.lattice._core",
                ["src/tdtlab/lattice/_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
