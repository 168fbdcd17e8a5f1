"""Controlled chain homotopies on simplicial sets and classifying spaces."""

__version__ = "0.1.0"
