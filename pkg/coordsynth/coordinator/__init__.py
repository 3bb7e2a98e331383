"""Coordinator conversions, normalization and fulltree utilities."""
