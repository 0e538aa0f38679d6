"""Unit tests initialization."""
