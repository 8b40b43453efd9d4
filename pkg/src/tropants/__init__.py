"""Exact toolkit for tropical pants decompositions, toric degenerations and their mirrors."""

__version__ = "0.1.0"
