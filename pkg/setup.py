"""Build script for the optional Cython kernels.

If Cython or a C compiler is missing the package still installs and runs on
the pure-Python fallback.
"""
import numpy as np
from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/zipfcode/_ckernels.pyx",
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.include_dirs.append(np.get_include())
        ext.define_macros.append(("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION"))
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
