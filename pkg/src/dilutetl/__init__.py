"""Exact homological computations for dilute Temperley-Lieb algebras.

The package enumerates the planar diagram basis, multiplies diagrams
exactly over Z, Q, F_p or Z[delta], constructs the idempotent cover of
the augmentation ideal and its Mayer-Vietoris resolution, and computes
Tor and Ext of the trivial module with independent bar-resolution and
brute-force oracles.
"""

__version__ = "0.1.0"
