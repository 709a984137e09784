"""Exact checks of heredity and standard stratification for endomorphism
algebras of Hecke-algebra modules, with Kazhdan-Lusztig cells and
decomposition matrices."""

__version__ = "0.1.0"
