"""Dense matrices of Poly entries."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .poly import ONE_KEY, Poly


class ExactMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], rows: int | None = None, cols: int | None = None):
        grid = [[Poly.coerce(x) for x in row] for row in entries]
        self.rows = len(grid) if rows is None else rows
        self.cols = (len(grid[0]) if grid else 0) if cols is None else cols
        if len(grid) != self.rows or any(len(r) != self.cols for r in grid):
            raise ValueError("ragged or mis-sized matrix")
        self.entries = tuple(tuple(r) for r in grid)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        z = Poly()
        return cls([[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int, scale=1) -> "ExactMatrix":
        s = Poly.coerce(scale)
        z = Poly()
        return cls([[s if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, diag: Sequence) -> "ExactMatrix":
        n = len(diag)
        z = Poly()
        return cls([[diag[i] if i == j else z for j in range(n)] for i in range(n)], n, n)

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def is_diagonal(self) -> bool:
        return all(not x for i, row in enumerate(self.entries) for j, x in enumerate(row) if i != j)

    def diag(self) -> list[Poly]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)], self.cols, self.rows)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def map(self, fn) -> "ExactMatrix":
        return ExactMatrix([[fn(x) for x in row] for row in self.entries], self.rows, self.cols)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
            self.rows, self.cols,
        )

    def __neg__(self) -> "ExactMatrix":
        return self.map(lambda x: -x)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = Poly.coerce(c)
        return self.map(lambda x: x * c)

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            return self.matmul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self.matmul(other)

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return ExactMatrix.zeros(self.rows, other.cols)
        # Split both factors by monomial: A = sum_a mono_a * A_a with rational A_a,
        # then multiply the rational slices over common-denominator integers.
        sa = _slices(self)
        sb = _slices(other)
        acc: list[list[dict]] = [[{} for _ in range(other.cols)] for _ in range(self.rows)]
        for ka, (da, ma) in sa.items():
            for kb, (db, mb) in sb.items():
                key = ka + kb - ONE_KEY
                den = da * db
                prod = _int_matmul(ma, mb)
                for i in range(self.rows):
                    row = prod[i]
                    arow = acc[i]
                    for j in range(other.cols):
                        v = row[j]
                        if v:
                            d = arow[j]
                            d[key] = d.get(key, 0) + Fraction(v, den)
        return ExactMatrix(
            [[Poly({k: v for k, v in cell.items() if v}) for cell in row] for row in acc],
            self.rows, other.cols,
        )

    def commutator(self, other: "ExactMatrix") -> "ExactMatrix":
        return self.matmul(other) - other.matmul(self)

    def apply(self, vec: Sequence) -> list[Poly]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = [Poly.coerce(x) for x in vec]
        out = []
        for row in self.entries:
            acc = Poly()
            for a, b in zip(row, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def subs(self, name: str, value) -> "ExactMatrix":
        return self.map(lambda x: x.subs(name, value))

    def evaluate(self, **kw) -> "ExactMatrix":
        return self.map(lambda x: x.evaluate(kw))

    def coeff(self, name: str, power: int) -> "ExactMatrix":
        return self.map(lambda x: x.coeff(name, power))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.entries]

    @classmethod
    def from_json(cls, data: list) -> "ExactMatrix":
        return cls([[Poly.from_json(x) for x in row] for row in data])

    def __repr__(self) -> str:
        return "ExactMatrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.entries) + "])"


def _slices(m: ExactMatrix) -> dict[int, tuple[int, list[list[int]]]]:
    """Per monomial key: (common denominator, integer matrix of numerators)."""
    fr: dict[int, dict[tuple[int, int], Fraction]] = {}
    for i, row in enumerate(m.entries):
        for j, x in enumerate(row):
            for k, v in x.raw_terms.items():
                fr.setdefault(k, {})[(i, j)] = v
    out = {}
    for k, cells in fr.items():
        den = 1
        for v in cells.values():
            den = lcm(den, v.denominator)
        mat = [[0] * m.cols for _ in range(m.rows)]
        for (i, j), v in cells.items():
            mat[i][j] = v.numerator * (den // v.denominator)
        out[k] = (den, mat)
    return out


def _int_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    bt = list(zip(*b))
    out = []
    for row in a:
        nz = [(t, x) for t, x in enumerate(row) if x]
        if not nz:
            out.append([0] * len(bt))
            continue
        out.append([sum(x * col[t] for t, x in nz) for col in bt])
    return out
