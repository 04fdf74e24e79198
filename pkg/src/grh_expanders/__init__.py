"""Expander graphs from class groups and isogenies, checked at desk scale."""

__version__ = "0.1.0"
