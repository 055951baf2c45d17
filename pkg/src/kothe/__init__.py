"""Computational laboratory for ℓ-Köthe sequence spaces."""

__version__ = "0.1.0"
