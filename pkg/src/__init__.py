"""Tuber Grade - potato sprout and shelf-life classification pipeline."""

__version__ = "1.0.0"
