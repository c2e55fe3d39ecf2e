"""Rigorous certification and numerical validation of sharp Riesz-projection inequalities."""

__version__ = "0.1.0"
