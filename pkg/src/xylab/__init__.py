"""Thermal multipartite entanglement of anisotropic Heisenberg XY chains."""

__version__ = "0.1.0"
