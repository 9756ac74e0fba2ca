"""Division-free characteristic polynomials and exact linear solves."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .matrix import ExactMatrix
from .poly import Poly


class InconsistentSystem(ValueError):
    """Raised when no exact solution exists; ``row`` is the first violated equation."""

    def __init__(self, row: int, residual=None):
        super().__init__(f"inconsistent linear system: equation {row} cannot be satisfied")
        self.row = row
        self.residual = residual


class RankDeficient(ValueError):
    def __init__(self, rank: int, cols: int):
        super().__init__(f"linear system is rank deficient: rank {rank} < {cols} unknowns")
        self.rank = rank
        self.cols = cols


def charpoly(m: ExactMatrix, rho_name: str = "rho") -> Poly:
    """det(rho*I - m) by Berkowitz's algorithm (no divisions)."""
    if not m.is_square():
        raise ValueError("charpoly needs a square matrix")
    n = m.rows
    rho = Poly.var(rho_name)
    for row in m.entries:
        for x in row:
            if not x.free_of(rho_name):
                raise ValueError(f"matrix entries already contain {rho_name}")
    a = m.entries
    vec = [Poly.const(1)]
    for k in range(n):
        # leading (k+1)x(k+1) block: [[A, C], [R, a_kk]]
        col = [a[i][k] for i in range(k)]
        row = [a[k][j] for j in range(k)]
        toe = [Poly.const(1), -a[k][k]]
        w = col
        for _ in range(k):
            toe.append(-_dot(row, w))
            w = [_dot([a[i][j] for j in range(k)], w) for i in range(k)]
        # new vector = T * vec, T lower-triangular Toeplitz of size (k+2) x (k+1)
        new = []
        for i in range(k + 2):
            acc = Poly()
            for j in range(min(i, k) + 1):
                t = toe[i - j] if i - j < len(toe) else None
                if t is not None and t and vec[j]:
                    acc = acc + t * vec[j]
            new.append(acc)
        vec = new
    out = Poly()
    for i, c in enumerate(vec):
        if c:
            out = out + c * rho ** (n - i)
    return out


def _dot(a: Sequence[Poly], b: Sequence[Poly]) -> Poly:
    acc = Poly()
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


class RationalFunction:
    """num/den with Poly parts; kept unreduced except for exact-division shortcuts."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = Poly.coerce(num), Poly.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if den.is_constant():
            num, den = num * (1 / den.as_constant()), Poly.const(1)
        elif num:
            try:
                num, den = num.divide_exact(den), Poly.const(1)
            except ArithmeticError:
                pass
        else:
            den = Poly.const(1)
        self.num = num
        self.den = den

    def is_poly(self) -> bool:
        return self.den == Poly.const(1)

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ArithmeticError(f"({self.num})/({self.den}) is not a polynomial")
        return self.num

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash(self.num) if self.is_poly() else 0

    def __repr__(self) -> str:
        if self.is_poly():
            return f"RationalFunction({self.num})"
        return f"RationalFunction(({self.num})/({self.den}))"


def _is_rational_matrix(rows: Sequence[Sequence[Poly]]) -> bool:
    return all(x.is_constant() for row in rows for x in row)


def solve_linear(a: ExactMatrix | Sequence[Sequence], b: Sequence) -> list[RationalFunction]:
    """Exact solution of a.x = b for full-column-rank (possibly overdetermined) systems."""
    rows = a.entries if isinstance(a, ExactMatrix) else [[Poly.coerce(x) for x in r] for r in a]
    rhs = [Poly.coerce(x) for x in b]
    if len(rows) != len(rhs):
        raise ValueError("right-hand side length mismatch")
    ncols = len(rows[0]) if rows else 0
    if _is_rational_matrix(rows):
        sol = solve_rational([[x.constant_term() for x in r] for r in rows], rhs, ncols)
        return [RationalFunction(x) for x in sol]
    return _solve_bareiss(rows, rhs, ncols)


def solve_rational(rows: Sequence[Sequence[Fraction]], rhs: Sequence, ncols: int | None = None) -> list:
    """Gauss-Jordan with rational pivots; right-hand sides may be Polys or Fractions."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    aug = [(list(map(Fraction, r)), rhs[i], i) for i, r in enumerate(rows)]
    pivots = []
    prow = 0
    for c in range(ncols):
        piv = next((r for r in range(prow, len(aug)) if aug[r][0][c]), None)
        if piv is None:
            continue
        aug[prow], aug[piv] = aug[piv], aug[prow]
        pr, pb, pi = aug[prow]
        inv = 1 / pr[c]
        pr = [x * inv for x in pr]
        pb = pb * inv
        aug[prow] = (pr, pb, pi)
        for r in range(len(aug)):
            if r != prow:
                rr, rb, ri = aug[r]
                f = rr[c]
                if f:
                    aug[r] = ([x - f * y for x, y in zip(rr, pr)], rb - pb * f, ri)
        pivots.append(c)
        prow += 1
    bad = [ri for rr, rb, ri in aug[prow:] if rb]
    if bad:
        first = min(bad)
        raise InconsistentSystem(first, next(rb for rr, rb, ri in aug[prow:] if ri == first))
    if prow < ncols:
        raise RankDeficient(prow, ncols)
    return [aug[i][1] for i in range(ncols)]


def _solve_bareiss(rows, rhs, ncols) -> list[RationalFunction]:
    aug = [(list(r) + [rhs[i]], i) for i, r in enumerate(rows)]
    prev = Poly.const(1)
    prow = 0
    for c in range(ncols):
        piv = next((r for r in range(prow, len(aug)) if aug[r][0][c]), None)
        if piv is None:
            raise RankDeficient(prow, ncols)
        aug[prow], aug[piv] = aug[piv], aug[prow]
        pr = aug[prow][0]
        p = pr[c]
        for r in range(len(aug)):
            if r == prow:
                continue
            rr, ri = aug[r]
            f = rr[c]
            # Bareiss division is exact for rows below the pivot; rows above
            # only need their pivot column cleared, so they skip it.
            if r > prow:
                aug[r] = ([(x * p - f * y).divide_exact(prev) for x, y in zip(rr, pr)], ri)
            elif f:
                aug[r] = ([x * p - f * y for x, y in zip(rr, pr)], ri)
        prev = p
        prow += 1
    # consistency of extra rows
    bad = [ri for rr, ri in aug[prow:] if rr[-1]]
    if bad:
        raise InconsistentSystem(min(bad))
    out = []
    for i in range(ncols):
        rr, _ = aug[i]
        out.append(RationalFunction(rr[-1], rr[i]))
    return out
