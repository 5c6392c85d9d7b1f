"""Abelian flag functions, c-pairs and logarithmic functions."""

__version__ = "0.1.0"
