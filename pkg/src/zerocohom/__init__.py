"""Cohomology of finite monoids with zero with coefficients in natural systems."""

__version__ = "0.1.0"
