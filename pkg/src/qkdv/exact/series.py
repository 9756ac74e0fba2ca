"""Truncated power series in one named variable with Poly coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import Poly, var_index


class ExactSeries:
    """``sum(coeffs[i] * var**i for i < order)``; everything at or past ``order`` is unknown."""

    __slots__ = ("variable", "order", "coeffs")

    def __init__(self, variable: str, coeffs: Sequence, order: int | None = None):
        var_index(variable)
        if order is None:
            order = len(coeffs)
        if order < 0:
            raise ValueError("negative truncation order")
        cs = [Poly.coerce(c) for c in list(coeffs)[:order]]
        cs.extend(Poly() for _ in range(order - len(cs)))
        self.variable = variable
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def from_poly(cls, p: Poly, variable: str, order: int) -> "ExactSeries":
        parts = Poly.coerce(p).collect(variable)
        if any(e < 0 for e in parts):
            raise ValueError("negative powers cannot be stored in a power series")
        return cls(variable, [parts.get(i, Poly()) for i in range(order)], order)

    @classmethod
    def one(cls, variable: str, order: int) -> "ExactSeries":
        return cls(variable, [1], order)

    def _check(self, other: "ExactSeries") -> None:
        if self.variable != other.variable:
            raise ValueError("series in different variables")

    def _lift(self, other) -> "ExactSeries":
        if isinstance(other, ExactSeries):
            self._check(other)
            return other
        return ExactSeries(self.variable, [Poly.coerce(other)], self.order)

    def __getitem__(self, i: int) -> Poly:
        if not 0 <= i < self.order:
            raise IndexError("coefficient beyond truncation order")
        return self.coeffs[i]

    def __add__(self, other) -> "ExactSeries":
        other = self._lift(other)
        n = min(self.order, other.order)
        return ExactSeries(self.variable, [self.coeffs[i] + other.coeffs[i] for i in range(n)], n)

    __radd__ = __add__

    def __neg__(self) -> "ExactSeries":
        return ExactSeries(self.variable, [-c for c in self.coeffs], self.order)

    def __sub__(self, other) -> "ExactSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "ExactSeries":
        return self._lift(other) - self

    def __mul__(self, other) -> "ExactSeries":
        if not isinstance(other, ExactSeries):
            c = Poly.coerce(other)
            return ExactSeries(self.variable, [x * c for x in self.coeffs], self.order)
        self._check(other)
        n = min(self.order, other.order)
        out = [Poly() for _ in range(n)]
        for i, a in enumerate(self.coeffs[:n]):
            if not a:
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return ExactSeries(self.variable, out, n)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExactSeries":
        if n < 0:
            return self.reciprocal() ** (-n)
        out = ExactSeries.one(self.variable, self.order)
        for _ in range(n):
            out = out * self
        return out

    def reciprocal(self) -> "ExactSeries":
        """Multiplicative inverse; the constant term must be a nonzero monomial."""
        if self.order == 0:
            return self
        c0 = self.coeffs[0]
        if not c0.is_monomial():
            raise ArithmeticError("series not invertible")
        inv0 = c0 ** -1
        out = [inv0]
        for n in range(1, self.order):
            acc = Poly()
            for j in range(1, n + 1):
                if self.coeffs[j]:
                    acc = acc + self.coeffs[j] * out[n - j]
            out.append(-(acc * inv0))
        return ExactSeries(self.variable, out, self.order)

    def __truediv__(self, other) -> "ExactSeries":
        if isinstance(other, ExactSeries):
            return self * other.reciprocal()
        return self * (Fraction(1) / Fraction(other))

    def compose(self, inner: "ExactSeries") -> "ExactSeries":
        """``self(inner)``; ``inner`` must have zero constant term."""
        if inner.order and inner.coeffs[0]:
            raise ArithmeticError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        out = ExactSeries(inner.variable, [], n)
        # Horner from the top coefficient down
        for c in reversed(self.coeffs[:n]):
            out = out * inner + ExactSeries(inner.variable, [c], n)
        return out

    def truncate(self, order: int) -> "ExactSeries":
        return ExactSeries(self.variable, self.coeffs[: min(order, self.order)], min(order, self.order))

    def to_poly(self) -> Poly:
        out = Poly()
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + c.shift(self.variable, i)
        return out

    def map(self, fn) -> "ExactSeries":
        return ExactSeries(self.variable, [fn(c) for c in self.coeffs], self.order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactSeries):
            return NotImplemented
        return (self.variable, self.order, self.coeffs) == (other.variable, other.order, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.variable, self.order, self.coeffs))

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{self.variable}^{i}" for i, c in enumerate(self.coeffs) if c)
        return f"ExactSeries({body or '0'} + O({self.variable}^{self.order}))"


def exp_series(p: Poly, variable: str, order: int) -> ExactSeries:
    """exp(p) truncated, for p with no constant term in ``variable``."""
    s = ExactSeries.from_poly(p, variable, order)
    if s.order and s.coeffs[0]:
        raise ArithmeticError("exp needs zero constant term")
    out = ExactSeries.one(variable, order)
    term = ExactSeries.one(variable, order)
    for n in range(1, order):
        term = term * s * Fraction(1, n)
        out = out + term
    return out
