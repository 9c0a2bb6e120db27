"""Exact computations with level-N form class groups of imaginary quadratic discriminants."""

__version__ = "0.1.0"
