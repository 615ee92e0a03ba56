"""Builds the optional compiled kernels; the package falls back to pure Python without them."""
from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize("src/loopcalc/_kernels.pyx", language_level="3")

setup(ext_modules=ext_modules)
