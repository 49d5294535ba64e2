"""Coends, left Kan extensions and tensor products of modules over finite data."""

from .errors import KanexError

__version__ = "0.1.0"

__all__ = ["KanexError", "__version__"]
