"""Build script for the optional compiled simplex kernel.

The package is pure Python plus one Cython extension for the LP pivot
loop.  The extension is marked optional: if no compiler or Cython is
available the install still succeeds and the numpy fallback in
``gaitgraph._kernels.pure`` is used at import time.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "gaitgraph._kernels._simplex",
                ["src/gaitgraph/_kernels/_simplex.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
