"""Analogy-based software effort estimation with firefly-optimized feature weights."""

__version__ = "1.0.0"
