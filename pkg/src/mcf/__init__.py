"""Exact Jacobi-Perron multidimensional continued fractions.

Core pieces: exact field arithmetic (:mod:`mcf.exactnum`), the expansion
itself (:mod:`mcf.jacobi_perron`), convergent tables (:mod:`mcf.convergents`),
linear recurrence tooling (:mod:`mcf.lrs`), the periodicity equivalence in
both directions (:mod:`mcf.periodicity`), and the periodic ternary
representation of cubic irrationals (:mod:`mcf.cubic_rep`).  A FastAPI
service (:mod:`mcf.service`) exposes every pipeline; the CLI is a thin
client over the same handlers.
"""

from .exactnum import AlgebraicReal, FieldElement, Rational

__all__ = ["AlgebraicReal", "FieldElement", "Rational"]

__version__ = "0.1.0"
