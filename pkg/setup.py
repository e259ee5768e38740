#!/usr/bin/env python3
"""Build script.  The compiled kernel is optional: if Cython (or a C
compiler) is unavailable the package installs pure-Python only and
selects the fallback at import time."""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "homolocal._kernels._fast",
                ["src/homolocal/_kernels/_fast.pyx"],
            )
        ],
        language_level=3,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
