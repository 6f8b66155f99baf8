"""Exact (co)simplicial homological algebra over the rationals."""

__version__ = "0.1.0"
