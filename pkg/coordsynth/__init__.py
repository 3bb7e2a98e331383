"""Coordination synthesis for networks of CSP agents."""

__version__ = "0.1.0"
