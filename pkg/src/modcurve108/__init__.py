"""Exact verification toolkit for the automorphisms of the modular curve X0(108)."""

__version__ = "0.1.0"
