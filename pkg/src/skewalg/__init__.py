"""Exact-arithmetic workbench for finite-dimensional anticommutative algebras."""

__version__ = "0.1.0"
