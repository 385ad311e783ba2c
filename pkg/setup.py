"""Build the optional Cython kernel; the package falls back to NumPy without it."""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CASIMIR_PLASMA_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "casimir_plasma._kernels",
                    ["src/casimir_plasma/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
