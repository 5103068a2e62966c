"""Exact group cohomology tools for topological complexity of groups."""

__version__ = "0.1.0"
