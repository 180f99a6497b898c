"""Closed-form linear recurrences, Vandermonde inverses and spectral
convergence bounds for Markov chains and digraph diameters."""

__version__ = "0.1.0"
