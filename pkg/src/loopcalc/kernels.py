"""Kernel backend selection: the compiled extension when built, else pure Python."""
try:
    from loopcalc import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not compiled
    from loopcalc import _kernels_py as _impl

    BACKEND = "python"

mul_exponents = _impl.mul_exponents
rref = _impl.rref

__all__ = ["BACKEND", "mul_exponents", "rref"]
