"""Toric manifolds over wedged polygons: classification and projectivity certificates."""

__version__ = "0.1.0"
