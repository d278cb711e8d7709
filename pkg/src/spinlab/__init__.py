"""Exact-arithmetic toolkit for two-pointed ineffective spin hyperelliptic curves."""

__version__ = "0.1.0"
