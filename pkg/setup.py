"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension (a pure-Python
implementation of the same kernels is selected at import time), so a failed
compile only costs speed, never correctness.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "toafall._kernels",
                ["src/toafall/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
else:
    extensions = []

setup(ext_modules=extensions)
