"""Exact tangent-complex computations for character stacks and strict commuting pairs."""

__version__ = "0.1.0"
