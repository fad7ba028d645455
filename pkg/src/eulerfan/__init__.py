"""Riemann data for the full Euler system: classification, fan subsolutions
and patched non-uniqueness certificates."""
