"""Crystallization census toolkit for closed 3-manifolds."""

__version__ = "0.1.0"
