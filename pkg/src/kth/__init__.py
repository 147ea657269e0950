"""Exact K-theory of the lens spaces via integer normal forms."""
