"""Innermost termination and runtime complexity of rewrite systems by cost-size tuple interpretations."""

__version__ = "0.1.0"
