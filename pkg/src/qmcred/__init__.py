"""Rank-constrained Max-Cut and Quantum Max-Cut reduction toolkit."""

__version__ = "0.1.0"
