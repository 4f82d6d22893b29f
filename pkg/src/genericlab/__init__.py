"""Exact finite models for perturbation stability of measure-preserving
automorphisms, type-space distances, and unitary spectra on the circle."""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
