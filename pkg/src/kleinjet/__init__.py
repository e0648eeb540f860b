"""Exact computations for infinitesimal Klein geometries and their jet realizations."""

__version__ = "0.1.0"
