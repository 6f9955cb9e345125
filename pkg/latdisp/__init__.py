"""Exact dispersion of two-dimensional lattices through continued fractions."""

__version__ = "1.0.0"
