"""Exact complex Ising and Tutte partition functions, gadget reductions and IQP encodings."""

__version__ = "0.1.0"
