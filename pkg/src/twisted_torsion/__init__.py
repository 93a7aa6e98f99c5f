"""Twisted cohomology and torsion of finite Z2-graded cochain complexes."""

__version__ = "0.1.0"
