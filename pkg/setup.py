from setuptools import Extension, setup

import numpy as np

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "subdiff._kernels",
                ["src/subdiff/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # the pure-python fallback keeps a failed compile from
                # blocking the install
                optional=True,
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
