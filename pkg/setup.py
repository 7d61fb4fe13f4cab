import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("NTPSIM_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "ntpsim._kernel",
                ["src/ntpsim/_kernel.pyx"],
                include_dirs=[np.get_include()],
                # contraction into FMA would break bit-parity with the Python kernel
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
