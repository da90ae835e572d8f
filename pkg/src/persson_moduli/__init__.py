"""Exact combinatorics of (Z/2)^m covers of the plane branched along lines,
their stable degenerations and the lattices and groups attached to them."""

__version__ = "0.1.0"
