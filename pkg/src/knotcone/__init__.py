"""Knot Floer complexes, surgery mapping cones and equivariant local equivalence."""

__version__ = "0.1.0"
