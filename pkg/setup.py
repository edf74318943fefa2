"""Build hook: compile the optional fast-kernel extension when Cython is present.

The package is fully functional without the extension (malle.kernels falls
back to the pure backend), so the build never hard-fails on a missing
compiler or Cython.
"""

import os

from setuptools import setup

PYX = os.path.join("src", "malle", "_fastkernels.pyx")

ext_modules = []
try:
    if not os.path.exists(PYX):
        raise ImportError
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext = Extension(
        "malle._fastkernels",
        sources=[PYX],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
    ext_modules = cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
