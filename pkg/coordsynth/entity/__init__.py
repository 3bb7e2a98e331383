"""Data models shared across the synthesis pipeline."""
