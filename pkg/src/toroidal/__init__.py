"""Exact symbolic verification of quantum toroidal gl_n structures."""

__version__ = "0.1.0"
