"""Entanglement generation at beam splitters and degradation in fibers."""

__version__ = "0.1.0"
