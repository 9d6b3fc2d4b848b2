"""Threshold-rule Hall of Fame analyses over Lahman career counts."""

__version__ = "0.1.0"
