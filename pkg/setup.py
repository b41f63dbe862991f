"""Build shim for the optional compiled kernels.

The package is fully functional without the extension; a failed build
falls back to the pure-Python kernels at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CHEFS_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "chefs._kernels",
                    sources=["src/chefs/_kernels.pyx"],
                    optional=True,
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
