"""Build script for the optional compiled kernel extension.

The package is pure Python plus one Cython extension holding the hot
kernels (Kraus-sum application and trace products). The extension is
marked optional: if no compiler is available the install still succeeds
and the numpy fallback in ``oamic._kernels_py`` is used at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # sdist without Cython: fall back to pure Python
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "oamic._kernels_c",
                ["src/oamic/_kernels_c.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
