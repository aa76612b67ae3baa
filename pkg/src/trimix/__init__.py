"""Exact counting, coupling and certification toolkit for 9-colourings of
the triangular lattice."""

__version__ = "0.1.0"
