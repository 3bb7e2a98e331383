"""Bounded synthesis of Moore machines through SAT."""
