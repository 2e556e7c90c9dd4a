"""Twisted double Eisenstein series: exact and numerical Fourier coefficients."""

__version__ = "0.1.0"
