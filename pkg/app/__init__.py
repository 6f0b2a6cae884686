"""Certified computer algebra for Pinchuk-type polynomial maps."""

__version__ = "0.1.0"
