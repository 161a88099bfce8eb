"""Bifurcation analysis of invariant hypertori in non-resonant multiple Hopf Eulerian flows."""

__version__ = "0.1.0"
