"""Solos calculus, solo diagrams and differential interaction nets."""

__version__ = "0.1.0"
