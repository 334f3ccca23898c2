"""Exact arithmetic and point-set generation for fixed-parameter extrapolation."""

__version__ = "0.1.0"
