"""Exact two-dimensional minimal model program, geography of log models and
Sarkisov links on projective toric surfaces."""
from __future__ import annotations

__version__ = "0.1.0"
