# conformext/__init__.py

"""Computational conformal geometry on planar Jordan domains: metrics, phi-integrability,
dyadic crosscut families, finite-depth Sobolev extensions and the folded trapezoid domain."""

__version__ = "1.0.0"
