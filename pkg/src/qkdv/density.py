"""Differential polynomials in u, u_x, u_xx, ... with Poly coefficients.

A monomial u_{j1 x} ... u_{jn x} is keyed by the sorted tuple (j1, ..., jn) of
derivative orders; the empty tuple is the constant monomial.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping

from .exact import Poly, solve_rational
from .exact.linalg import InconsistentSystem

Key = tuple


def _key(orders: Iterable[int]) -> Key:
    k = tuple(sorted(int(j) for j in orders))
    if any(j < 0 for j in k):
        raise ValueError("derivative orders must be non-negative")
    return k


class Density:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Iterable[int], object] | None = None):
        out: dict[Key, Poly] = {}
        for orders, c in (terms or {}).items():
            k = _key(orders)
            v = out.get(k, Poly()) + Poly.coerce(c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        self.terms = out

    @classmethod
    def u(cls, order: int = 0) -> "Density":
        return cls({(order,): 1})

    @classmethod
    def const(cls, c) -> "Density":
        return cls({(): c})

    def __add__(self, other) -> "Density":
        other = other if isinstance(other, Density) else Density.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, Poly()) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Density._from(out)

    __radd__ = __add__

    def __neg__(self) -> "Density":
        return Density._from({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "Density":
        other = other if isinstance(other, Density) else Density.const(other)
        return self + (-other)

    def __mul__(self, other) -> "Density":
        if not isinstance(other, Density):
            c = Poly.coerce(other)
            return Density._from({k: v * c for k, v in self.terms.items() if v * c})
        out: dict[Key, Poly] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                s = out.get(k, Poly()) + v1 * v2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return Density._from(out)

    __rmul__ = __mul__

    @classmethod
    def _from(cls, terms: dict) -> "Density":
        d = object.__new__(cls)
        d.terms = {k: v for k, v in terms.items() if v}
        return d

    def __eq__(self, other) -> bool:
        if not isinstance(other, Density):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def constant(self) -> Poly:
        return self.terms.get((), Poly())

    def without_constant(self) -> "Density":
        return Density._from({k: v for k, v in self.terms.items() if k})

    def map_coeffs(self, fn) -> "Density":
        return Density._from({k: fn(v) for k, v in self.terms.items()})

    def diff_x(self) -> "Density":
        """Total x-derivative."""
        out: dict[Key, Poly] = {}
        for k, v in self.terms.items():
            for pos in range(len(k)):
                if pos and k[pos] == k[pos - 1]:
                    continue
                mult = k.count(k[pos])
                new = list(k)
                new[pos] += 1
                nk = tuple(sorted(new))
                out[nk] = out.get(nk, Poly()) + v * mult
        return Density._from(out)

    def diff_u(self, order: int = 0) -> "Density":
        """Partial derivative with respect to u_{order x}."""
        out: dict[Key, Poly] = {}
        for k, v in self.terms.items():
            mult = k.count(order)
            if mult:
                new = list(k)
                new.remove(order)
                nk = tuple(new)
                out[nk] = out.get(nk, Poly()) + v * mult
        return Density._from(out)

    def max_order(self) -> int:
        return max((max(k) for k in self.terms if k), default=0)

    def euler(self) -> "Density":
        """Variational derivative sum_j (-d/dx)^j dF/du_j; zero iff F is a total derivative (up to a constant)."""
        out = Density()
        for j in range(self.max_order() + 1):
            piece = self.diff_u(j)
            for _ in range(j):
                piece = -piece.diff_x()
            out = out + piece
        return out

    def is_total_derivative(self) -> bool:
        return self.without_constant().euler().is_zero()

    def coeff(self, name: str, power: int) -> "Density":
        return self.map_coeffs(lambda p: p.coeff(name, power))

    def subs(self, name: str, value) -> "Density":
        return self.map_coeffs(lambda p: p.subs(name, value))

    def evaluate(self, **kw) -> "Density":
        return self.map_coeffs(lambda p: p.evaluate(kw))

    def to_json(self) -> list:
        return [{"orders": list(k), "coeff": v.to_json()} for k, v in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data: list) -> "Density":
        return cls({tuple(t["orders"]): Poly.from_json(t["coeff"]) for t in data})

    def __repr__(self) -> str:
        return f"Density({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, v in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            mono = "*".join(_mono_name(j, c) for j, c in sorted(Counter(k).items()))
            parts.append(f"({v})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _mono_name(j: int, count: int) -> str:
    base = "u" + ("_" + "x" * j if j else "")
    return base if count == 1 else f"{base}^{count}"


def monomials(n: int, total_order: int) -> list[Key]:
    """All monomials of u-degree n with total derivative order exactly total_order."""
    if n == 0:
        return [()] if total_order == 0 else []
    out = []
    for combo in combinations_with_replacement(range(total_order + 1), n):
        if sum(combo) == total_order:
            out.append(tuple(combo))
    return sorted(out)


def antiderivative(rhs: Density, ansatz: list[Key]) -> Density:
    """The density F spanned by ``ansatz`` with d/dx F = rhs; raises if none exists.

    Coefficients may be Polys; the system is solved over the rationals
    separately for every monomial of the coefficient ring.
    """
    images = [Density({k: 1}).diff_x() for k in ansatz]
    keys = sorted({k for img in images for k in img.terms} | set(rhs.terms))
    rows = [[img.terms.get(k, Poly()).constant_term() for img in images] for k in keys]
    b = [rhs.terms.get(k, Poly()) for k in keys]
    try:
        sol = solve_rational(rows, b, len(ansatz))
    except InconsistentSystem as exc:
        raise ArithmeticError(f"not an exact x-derivative (fails at monomial {keys[exc.row]})") from exc
    return Density({k: c for k, c in zip(ansatz, sol) if c})


def lenard_magri(m: int) -> Density:
    """Classical KdV density: (2m+3) d_x h_m = (2u d_x + u_x + eps2/4 d_x^3) h_{m-1}, h_{-1} = u."""
    if m < -1:
        raise ValueError("m must be at least -1")
    h = Density.u()
    u = Density.u()
    ux = Density.u(1)
    eps2 = Poly.var("eps2")
    for n in range(0, m + 1):
        rhs = 2 * u * h.diff_x() + ux * h + h.diff_x().diff_x().diff_x() * (eps2 * Fraction(1, 4))
        rhs = rhs * Fraction(1, 2 * n + 3)
        # homogeneity: u-degree d and 2g derivatives with eps^(2g), d + g = n + 2
        ansatz = [k for g in range(n + 2) for k in monomials(n + 2 - g, 2 * g)]
        h = antiderivative(rhs, ansatz)
    return h
