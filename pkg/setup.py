"""Build the optional Cython kernel module.

The package works without it: ``metalab.kernels`` falls back to the
numpy implementation when ``metalab._ckernels`` cannot be imported.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("METALAB_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "metalab._ckernels",
                    ["src/metalab/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
