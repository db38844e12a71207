"""Complexity analysis for relative term rewrite systems."""

__version__ = "0.1.0"
