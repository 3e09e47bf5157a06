"""Exact computations for conical resolutions of discriminants."""

__version__ = "0.1.0"
