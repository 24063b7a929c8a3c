"""Cohomology of finite groups, exact quadruples and six-term sequences."""

__version__ = "0.1.0"
