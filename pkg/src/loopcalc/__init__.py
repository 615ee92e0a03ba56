"""Exact computations on Sullivan models of free loop spaces.

Modules: ``gca`` (graded-commutative algebra), ``cdga`` (cohomology),
``loopmodel`` (the loop space model and its Hodge grading), ``cartan``
(contraction and Lie derivative operators), ``stringbv`` (finite BV
presentations), ``presentation``/``builtins``/``report``/``cli``.
"""
__version__ = "0.1.0"

from loopcalc.kernels import BACKEND  # noqa: E402

__all__ = ["BACKEND", "__version__"]
