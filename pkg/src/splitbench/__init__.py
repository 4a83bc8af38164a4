"""Finite-algebra workbench: splittings, dualities, expansions."""

__version__ = "0.1.0"
