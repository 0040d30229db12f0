"""
Package for ramification invariants of degree-p Kummer extensions.
"""
from __future__ import annotations

__author__ = "Materials Virtual Lab"
__email__ = "ongsp@eng.ucsd.edu"
__version__ = "2024.6.3"
