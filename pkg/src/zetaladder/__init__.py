"""Numerical laboratory for Jacob's ladders and zeta-transformed Fourier systems."""
