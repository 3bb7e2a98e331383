"""Specification automaton construction, explicit and symbolic."""
