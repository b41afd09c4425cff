"""Numerical toolkit for Morita equivalence of inclusions of finite-dimensional C*-algebras."""
__version__ = "0.1.0"
