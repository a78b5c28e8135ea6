"""Builds the optional Cython kernel extension.

If Cython or a C compiler is missing the package still installs and the
pure-Python kernels are used at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("advisory_miner._kernels._ckernels",
                   ["src/advisory_miner/_kernels/_ckernels.pyx"],
                   extra_compile_args=["-O3"],
                   optional=True)],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
