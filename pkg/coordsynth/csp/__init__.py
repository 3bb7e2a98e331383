"""Flat CSP processes: parsing, composition and simulation."""
