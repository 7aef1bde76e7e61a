"""Build script.

The package is pure Python plus one optional Cython extension holding the
dense GF(q) elimination/matmul kernels. If Cython or a C compiler is missing
the build falls back to the numpy kernels in xgab._kernels_pure; the installed
package selects whichever is available at import time.
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
                "xgab._kernels_c",
                ["src/xgab/_kernels_c.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    import sys

    print(f"warning: compiled kernels skipped ({exc}); using pure backend", file=sys.stderr)

setup(ext_modules=ext_modules)
