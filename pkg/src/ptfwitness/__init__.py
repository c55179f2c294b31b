"""Exact-rational construction and verification of dual witnesses for
threshold degree, smooth threshold degree, and sign-rank bounds."""

__version__ = "0.1.0"
