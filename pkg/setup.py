"""Builds the optional compiled simulation kernel.

Installation still succeeds without Cython or a C compiler; the package
then runs on its pure-Python kernel.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SYLLAB_NO_EXT", "") in ("", "0"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "syllab.mreasoner._kernel",
                    ["src/syllab/mreasoner/_kernel.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
