"""Exact arithmetic for rational iterated preimages of 0 under x^d + c."""

__version__ = "0.1.0"
