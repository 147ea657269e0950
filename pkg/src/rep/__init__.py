"""Truncated numeric representations used by the pairing computations."""
