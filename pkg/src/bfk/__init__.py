"""Exact-arithmetic tools for the double Burnside category of finite p-groups."""

__version__ = "0.1.0"
