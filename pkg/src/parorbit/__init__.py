"""Parabolic conjugation on nilpotent matrices: finiteness, normal forms and certificates."""

from .exact import QQ, GF, FieldTag, ExactMatrix, Subspace

__all__ = ["QQ", "GF", "FieldTag", "ExactMatrix", "Subspace"]
__version__ = "0.1.0"
