"""Exact computations for parabolic geometries with a |1|-grading."""

__version__ = "0.1.0"
