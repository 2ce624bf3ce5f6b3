"""Exact-rational checks for b_v(s)-metric spaces and self-maps on them."""

__version__ = "1.0.0"
