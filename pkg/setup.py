"""Build script.

The compiled kernel (`tripods._seeds`) is optional: if Cython or a C
compiler is unavailable the package installs anyway and falls back to the
pure-numpy implementation selected at import time in `tripods.kernels`.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "tripods._seeds",
                ["src/tripods/_seeds.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
