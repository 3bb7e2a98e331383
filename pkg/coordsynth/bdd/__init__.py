"""Binary decision diagrams over a fixed variable order."""
