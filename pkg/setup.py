"""Build script: compiles the optional Cython kernel.

Set FUDIST_NO_EXT=1 to skip the extension; the package then runs on the
pure-numpy fallback selected at import time.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FUDIST_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("fudist._kernels._core", ["src/fudist/_kernels/_core.pyx"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
