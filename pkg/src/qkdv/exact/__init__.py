"""Exact rational arithmetic: polynomials, series, matrices, linear algebra."""

from .linalg import InconsistentSystem, RankDeficient, RationalFunction, charpoly, solve_linear, solve_rational
from .matrix import ExactMatrix
from .poly import VARIABLES, Poly, const, var
from .series import ExactSeries, exp_series

__all__ = [
    "VARIABLES",
    "Poly",
    "var",
    "const",
    "ExactSeries",
    "exp_series",
    "ExactMatrix",
    "charpoly",
    "solve_linear",
    "solve_rational",
    "RationalFunction",
    "InconsistentSystem",
    "RankDeficient",
]
