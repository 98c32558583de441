"""Computational toolkit for the unrestricted virtual braid groups UVB_n."""

__version__ = "0.1.0"
