"""Exact toolkit for twenty-vertex configurations, mixed six-vertex configurations and
triple-free Gelfand-Tsetlin patterns."""

__version__ = "0.1.0"
