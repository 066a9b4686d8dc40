"""Cyclic-forge: graded Lie algebras, cyclic Higgs bundles and surface rigidity at desk scale."""

__version__ = "0.1.0"
