"""Exact computations in the truncated q-deformed bracketing algebra and its shadow."""

__version__ = "0.1.0"
