"""Exact and numeric tools for isochronous centers of planar polynomial systems."""

__version__ = "0.1.0"
