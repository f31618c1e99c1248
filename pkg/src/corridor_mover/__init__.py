"""Rectangles moving around the corner of planar corridors."""

__version__ = "0.1.0"
