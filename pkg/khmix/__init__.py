"""Exact Lee and Bar-Natan Khovanov homology, movie cobordism maps and the mixed invariant."""

__version__ = "0.1.0"
