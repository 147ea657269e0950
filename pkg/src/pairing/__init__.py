"""Certified traces and index pairings."""
