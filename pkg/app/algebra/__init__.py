"""Exact polynomial, interval and rational-function arithmetic."""
