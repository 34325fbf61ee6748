"""foamcat: universal sl(2) foam cohomology of colored framed tangles.

Exact computations over R = Z[i][a,h]: tangle diagrams in slice form,
formal complexes of crossingless diagrams with cobordism differentials,
delooping/Gaussian-elimination simplification, integral homology over Z[i],
and the triply-graded colored theory with its Poincare polynomial and the
colored Jones polynomial.
"""

from .gaussian import GaussianInteger, gaussian_divmod
from .ring import LaurentPolynomial, RingElement, TriPolynomial, quantum_integer
from .smith import SmithDecomposition, smith_normal_form

__all__ = [
    "GaussianInteger",
    "gaussian_divmod",
    "RingElement",
    "LaurentPolynomial",
    "TriPolynomial",
    "quantum_integer",
    "SmithDecomposition",
    "smith_normal_form",
]

__version__ = "0.1.0"
