"""Exact quantum KdV Hamiltonians, their joint spectrum and the identities around it."""

__version__ = "0.1.0"
