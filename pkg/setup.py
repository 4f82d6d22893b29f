"""Build the optional compiled kernels.

The Cython extension is best effort: if Cython or a C compiler is missing the
package installs without it and ``genericlab.kernels`` falls back to the
numpy implementation.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("GENERICLAB_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "genericlab._ckernels",
                    ["src/genericlab/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
