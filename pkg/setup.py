"""Optional compiled kernels; the package works without them."""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FANOVOL_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("fanovol._kernels_c", ["src/fanovol/_kernels_c.pyx"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
