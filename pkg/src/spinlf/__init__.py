"""Exact arithmetic for Spin L-functions on GSp6 via Eisenstein series on a
quaternionic group G: Jordan algebras, the 32-dimensional module, local
Fourier-coefficient polynomials, restriction to Siegel forms and the Spin
Euler product."""

from .quaternion import QuatAlgebra, QuatElement
from .scalars import CycloValue, DirichletChar, GaussianRational, GradedConstant

__version__ = "0.1.0"

__all__ = ["CycloValue", "DirichletChar", "GaussianRational", "GradedConstant", "QuatAlgebra", "QuatElement"]
