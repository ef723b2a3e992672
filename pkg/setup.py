"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python twin of the hot
kernels is selected at import time), so any build failure here downgrades
to a source-only install instead of aborting.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "qfde._kernels_cy",
                ["src/qfde/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError as exc:
    print(f"setup.py: Cython/numpy unavailable ({exc}); "
          "building without the compiled kernels", file=sys.stderr)

setup(ext_modules=ext_modules)
