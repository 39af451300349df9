"""Exact arithmetic for the two-fold metaplectic cover of GL2(Qp),
etale (phi,Gamma)-modules over k((X)) and mod-p Galois parameters."""

__version__ = "0.1.0"
