"""Exact tropical and lattice computations for gluing Gromov-Witten invariants."""

__version__ = "0.1.0"
