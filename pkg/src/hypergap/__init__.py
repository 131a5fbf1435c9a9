"""Fundamental gap of convex sectors in the hyperbolic plane."""

__version__ = "0.1.0"
