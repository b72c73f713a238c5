"""Exact p-adic Ducci dynamics."""

__version__ = "0.1.0"
