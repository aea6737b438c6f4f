"""Exact tools for polynomial central charges and asymptotic Z-stability."""

__version__ = "0.1.0"
