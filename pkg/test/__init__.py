"""Test suite for coordsynth."""
