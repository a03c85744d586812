"""Temporal inter-firm communication network metrics and the statistics relating them to patent output."""

from ._backend import BACKEND

__all__ = ["BACKEND", "__version__"]
__version__ = "0.1.0"
