"""Build the optional compiled kernel.

The Cython extension is skipped when Cython is unavailable; the package then
runs on the pure-Python kernel.
"""
from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("ncabel._ckernel", ["src/ncabel/_ckernel.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
