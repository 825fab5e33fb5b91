"""Finite verification toolkit for codegree Turán problems on tight cycles minus an edge and zycles."""

__version__ = "0.1.0"
