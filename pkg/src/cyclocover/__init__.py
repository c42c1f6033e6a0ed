"""Cyclically covering subspaces of F_q^n: arithmetic, criteria and searches."""

__version__ = "0.1.0"
