"""LTL parsing, semantics and translation to Buchi automata."""
