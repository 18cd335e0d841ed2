"""Exact constructions of Deza-graph families and self-orthogonal / LCD subspace codes."""

__version__ = "0.1.0"
