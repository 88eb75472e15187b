"""Exact computations with truncated FI^m-modules."""

__version__ = "0.1.0"
