"""Exact twisted Hochschild/cyclic calculus for DG algebras with a finite group action."""

__version__ = "0.1.0"
