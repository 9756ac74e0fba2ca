"""Partitions, their statistics, Bernoulli-type constants and symmetric-group characters.

Partitions of a fixed weight are always listed in reverse lexicographic order,
e.g. (4), (3,1), (2,2), (2,1,1), (1,1,1,1).  Every matrix and vector in the
package is indexed in this order.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable

from .exact import ExactSeries


class Partition(tuple):
    """Non-increasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(x) for x in parts)
        if any(x <= 0 for x in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be non-increasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        if not self:
            return self
        return Partition(sum(1 for x in self if x > j) for j in range(self[0]))

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for x in self:
            out[x] = out.get(x, 0) + 1
        return out

    def cells(self) -> list[tuple[int, int]]:
        """Cells (row, column), both 1-based."""
        return [(i + 1, j + 1) for i, row in enumerate(self) for j in range(row)]

    def contents(self) -> list[int]:
        """Contents col - row of every cell (the sign convention checked in the yjm module)."""
        return [j - i for i, j in self.cells()]

    def frobenius(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Arm and leg lengths (a_i, b_i) along the diagonal."""
        conj = self.conjugate()
        d = sum(1 for i, x in enumerate(self) if x > i)
        return (
            tuple(self[i] - i - 1 for i in range(d)),
            tuple(conj[i] - i - 1 for i in range(d)),
        )

    def label(self) -> str:
        return "(" + ",".join(map(str, self)) + ")"

    def __repr__(self) -> str:
        return f"Partition({tuple(self)})"


@lru_cache(maxsize=None)
def enumerate_partitions(k: int) -> tuple[Partition, ...]:
    """All partitions of k in reverse lexicographic order."""
    if k < 0:
        raise ValueError("weight must be non-negative")
    out: list[Partition] = []

    def rec(rest: int, cap: int, acc: list[int]) -> None:
        if rest == 0:
            out.append(Partition(acc))
            return
        for first in range(min(rest, cap), 0, -1):
            acc.append(first)
            rec(rest - first, first, acc)
            acc.pop()

    rec(k, k, [])
    return tuple(out)


def partition_count(k: int) -> int:
    """p(k) by Euler's pentagonal recurrence, independent of the enumeration."""
    p = [1] + [0] * k
    for n in range(1, k + 1):
        total = 0
        j = 1
        while True:
            g1 = j * (3 * j - 1) // 2
            if g1 > n:
                break
            sign = 1 if j % 2 else -1
            total += sign * p[n - g1]
            g2 = j * (3 * j + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            j += 1
        p[n] = total
    return p[k]


def index_of(k: int) -> dict[Partition, int]:
    return _index(k)


@lru_cache(maxsize=None)
def _index(k: int) -> dict[Partition, int]:
    return {lam: i for i, lam in enumerate(enumerate_partitions(k))}


# -- statistics --------------------------------------------------------------


def p_function(j: int, lam: Iterable[int]) -> Fraction:
    """P_j(lam) = sum_i (lam_i - i + 1/2)^j - (-i + 1/2)^j."""
    if j < 0:
        raise ValueError("j must be non-negative")
    half = Fraction(1, 2)
    total = Fraction(0)
    for i, part in enumerate(lam, start=1):
        total += (part - i + half) ** j - (-i + half) ** j
    return total


@lru_cache(maxsize=None)
def _beta_series(order: int) -> tuple[Fraction, ...]:
    # S(z) = sinh(z/2)/(z/2) = sum z^(2n) / (4^n (2n+1)!)
    s = [Fraction(0)] * order
    for n in range(0, (order + 1) // 2):
        if 2 * n < order:
            s[2 * n] = Fraction(1, 4 ** n * factorial(2 * n + 1))
    rec = ExactSeries("z", s, order).reciprocal()
    return tuple(c.constant_term() for c in rec.coeffs)


def beta_coeff(j: int) -> Fraction:
    """Coefficient of z^j in (z/2)/sinh(z/2)."""
    if j < 0:
        raise ValueError("j must be non-negative")
    # cache whole blocks of the series: orders 16, 32, 64, ...
    order = max(16, 1 << (j + 1).bit_length())
    return _beta_series(order)[j]


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, k) * bernoulli(k) for k in range(n)) / (n + 1)


def beta_closed_form(j: int) -> Fraction:
    """(1/2^(j-1) - 1) B_j / j!, used to cross-check beta_coeff."""
    if j == 0:
        return Fraction(1)
    if j % 2:
        return Fraction(0)
    return (Fraction(1, 2 ** (j - 1)) - 1) * bernoulli(j) / factorial(j)


def q_function(j: int, lam: Iterable[int]) -> Fraction:
    """Q_0 = 1, Q_j = P_{j-1}/(j-1)! + beta_j."""
    if j < 0:
        raise ValueError("j must be non-negative")
    if j == 0:
        return Fraction(1)
    return p_function(j - 1, lam) / factorial(j - 1) + beta_coeff(j)


def faulhaber(m: int) -> tuple[Fraction, ...]:
    """Ascending coefficients of F_{m+1}(x), with sum_{l=1}^N l^m = F_{m+1}(N)/(m+1)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    coeffs = [Fraction(0)] * (m + 2)
    for j in range(m + 1):
        # B_1 = -1/2 with the (-1)^j sign gives the sum up to N (not N-1)
        coeffs[m + 1 - j] += (-1) ** j * comb(m + 1, j) * bernoulli(j)
    return tuple(coeffs)


def eval_ascending(coeffs: Iterable[Fraction], x) -> Fraction:
    total = Fraction(0)
    for c in reversed(tuple(coeffs)):
        total = total * x + c
    return total


# -- conjugacy classes and characters -------------------------------------------


def z_value(mu: Iterable[int]) -> int:
    """z_mu = prod_i m_i! i^(m_i)."""
    out = 1
    for part, mult in Partition(mu).multiplicities().items():
        out *= factorial(mult) * part ** mult
    return out


def class_size(mu: Iterable[int]) -> int:
    mu = Partition(mu)
    return factorial(mu.weight) // z_value(mu)


def _beta_numbers(lam: Partition) -> tuple[int, ...]:
    n = len(lam)
    return tuple(sorted(lam[i] - (i + 1) + n for i in range(n)))


@lru_cache(maxsize=None)
def _mn(beads: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    bead_set = set(beads)
    total = 0
    for b in beads:
        t = b - r
        if t < 0 or t in bead_set:
            continue
        height = sum(1 for x in beads if t < x < b)
        new = tuple(sorted((bead_set - {b}) | {t}))
        total += (-1) ** height * _mn(new, rest)
    return total


def character(lam: Iterable[int], mu: Iterable[int]) -> int:
    """chi_lam on the class of cycle type mu, by the Murnaghan-Nakayama rule."""
    lam, mu = Partition(lam), Partition(mu)
    if lam.weight != mu.weight:
        raise ValueError(f"weight mismatch: |{lam.label()}| != |{mu.label()}|")
    return _mn(_beta_numbers(lam), tuple(mu))


@lru_cache(maxsize=None)
def character_table(k: int) -> tuple[tuple[int, ...], ...]:
    parts = enumerate_partitions(k)
    return tuple(tuple(character(lam, mu) for mu in parts) for lam in parts)


def character_table_csv(k: int) -> str:
    parts = enumerate_partitions(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lambda"] + [p.label() for p in parts])
    for lam, row in zip(parts, character_table(k)):
        writer.writerow([lam.label()] + list(row))
    return buf.getvalue()
