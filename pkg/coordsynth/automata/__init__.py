"""Buchi, co-Buchi and finite-word automata."""
