"""Exact generating functions for colored modular graphs."""

from .series import Series, TruncationSpec

__all__ = ["Series", "TruncationSpec"]
