"""Exact algebra for quadratic 2-types of 4-manifolds with small fundamental groups."""

__version__ = "0.1.0"
