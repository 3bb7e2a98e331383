"""Generators for the benchmark models, emitted as model text and parsed back."""
