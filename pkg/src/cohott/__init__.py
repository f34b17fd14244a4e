"""Proof-checking kernel for cohesive homotopy type theory."""

__version__ = "0.1.0"
