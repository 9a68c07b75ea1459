"""Pseudospectral Zakharov solver with I-method diagnostics and
restriction-norm estimate testers."""

__version__ = "0.1.0"
