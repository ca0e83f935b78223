"""Exact computations with locally finite derivations of K[X, Y]."""

__version__ = "0.1.0"
