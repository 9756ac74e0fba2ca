"""The bosonic Fock space: weight bases, Schur vectors, the inner product and quantization.

Vectors in weight k are coefficient lists over the monomials q_mu, mu running
over the partitions of k in canonical order.  Operators map weight d to weight
d + p and are stored as ExactMatrix blocks (rows: target, columns: source).

Quantization rules: U_k -> q_k (k > 0), U_0 -> the parameter U0,
U_{-k} -> hbar k d/dq_k, creations to the left.  hbar is h**2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Iterable, Sequence

from .density import Density
from .exact import ExactMatrix, Poly
from .partitions import (
    Partition,
    character,
    enumerate_partitions,
    index_of,
    z_value,
)


class FockError(RuntimeError):
    pass


def basis(k: int) -> tuple[Partition, ...]:
    return enumerate_partitions(k) if k >= 0 else ()


def dim(k: int) -> int:
    return len(basis(k))


# -- symmetric functions as T-basis vectors ------------------------------------------
# A "T-vector" of weight k is a dict Partition -> Fraction giving the coefficients
# of T_mu = q_mu / h^len(mu).


def _tmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = Partition(sorted(ka + kb, reverse=True))
            out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _complete(k: int) -> tuple:
    """h_k(T) = sum_{mu |- k} T_mu / z_mu, as sorted items."""
    if k < 0:
        return ()
    return tuple((mu, Fraction(1, z_value(mu))) for mu in enumerate_partitions(k))


def schur_jacobi_trudi(lam: Sequence[int]) -> dict:
    """s_lam(T) = det(h_{lam_i - i + j}) by Laplace expansion along rows."""
    lam = tuple(lam)
    n = len(lam)
    memo: dict = {}

    def det(i: int, cols: frozenset) -> dict:
        if i == n:
            return {Partition(): Fraction(1)}
        key = (i, cols)
        if key in memo:
            return memo[key]
        out: dict = {}
        ordered = sorted(cols)
        for pos, c in enumerate(ordered):
            hk = dict(_complete(lam[i] - (i + 1) + (c + 1)))
            if not hk:
                continue
            minor = det(i + 1, cols - {c})
            if not minor:
                continue
            sign = -1 if pos % 2 else 1
            for k2, v in _tmul(hk, minor).items():
                out[k2] = out.get(k2, 0) + sign * v
        out = {k2: v for k2, v in out.items() if v}
        memo[key] = out
        return out

    return det(0, frozenset(range(n)))


def schur_characters(lam: Sequence[int]) -> dict:
    """s_lam(T) = sum_mu chi_lam(mu) / z_mu T_mu."""
    lam = Partition(lam)
    out = {}
    for mu in enumerate_partitions(lam.weight):
        c = character(lam, mu)
        if c:
            out[mu] = Fraction(c, z_value(mu))
    return out


@lru_cache(maxsize=None)
def schur_vector(lam: Sequence[int]) -> tuple[Fraction, ...]:
    """Coefficients of s_lam(q/sqrt(hbar)) on the T_mu = q_mu/h^len(mu) of weight |lam|.

    Computed by Jacobi-Trudi and by characters; any disagreement is fatal.
    """
    lam = Partition(lam)
    jt = schur_jacobi_trudi(lam)
    ch = schur_characters(lam)
    if jt != ch:
        raise FockError(f"Jacobi-Trudi and character expansions of s_{lam.label()} disagree")
    return tuple(ch.get(mu, Fraction(0)) for mu in enumerate_partitions(lam.weight))


@lru_cache(maxsize=None)
def schur_matrix(k: int) -> tuple[tuple[Fraction, ...], ...]:
    """B with B[mu][lam] = coefficient of T_mu in s_lam."""
    cols = [schur_vector(lam) for lam in enumerate_partitions(k)]
    return tuple(tuple(col[i] for col in cols) for i in range(len(cols)))


@lru_cache(maxsize=None)
def schur_matrix_inverse(k: int) -> tuple[tuple[Fraction, ...], ...]:
    """B^{-1} = B^T diag(z) by orthonormality of the Schur basis."""
    b = schur_matrix(k)
    parts = enumerate_partitions(k)
    n = len(parts)
    return tuple(tuple(b[j][i] * z_value(parts[j]) for j in range(n)) for i in range(n))


def schur_q_vector(lam: Sequence[int]) -> list[Poly]:
    """s_lam(q/sqrt(hbar)) as coefficients on the monomials q_mu."""
    lam = Partition(lam)
    return [
        Poly.const(c).shift("h", -len(mu))
        for c, mu in zip(schur_vector(lam), enumerate_partitions(lam.weight))
    ]


# -- inner product ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def inner_weights(k: int) -> tuple[Poly, ...]:
    """<q_mu, q_mu> = z_mu hbar^len(mu)."""
    return tuple(Poly.monomial(z_value(mu), h=2 * len(mu)) for mu in basis(k))


def inner(f: Sequence, g: Sequence, k: int) -> Poly:
    w = inner_weights(k)
    if len(f) != len(w) or len(g) != len(w):
        raise ValueError(f"vectors do not live in weight {k}")
    out = Poly()
    for a, b, c in zip(f, g, w):
        a, b = Poly.coerce(a), Poly.coerce(b)
        if a and b:
            out = out + a * b * c
    return out


def weight_matrix(k: int) -> ExactMatrix:
    return ExactMatrix.diagonal(list(inner_weights(k)))


# -- operator blocks --------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorBlock:
    p: int
    source_weight: int
    matrix: ExactMatrix

    @property
    def target_weight(self) -> int:
        return self.source_weight + self.p

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "source_weight": self.source_weight,
            "basis": "monomial",
            "matrix": self.matrix.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "OperatorBlock":
        return cls(int(data["p"]), int(data["source_weight"]), ExactMatrix.from_json(data["matrix"]))


@lru_cache(maxsize=None)
def ordering_sum(orders: tuple[int, ...], modes: tuple[int, ...]) -> int:
    """sum over distinct arrangements of ``modes`` in the slots of prod_a k_a^{j_a}."""
    total = 0
    for perm in set(permutations(modes)):
        prod = 1
        for j, k in zip(orders, perm):
            if j:
                prod *= k ** j
                if not prod:
                    break
        total += prod
    return total


def _sub_multisets(mu: Partition, max_len: int):
    """Yield (A, falling-factorial count) for every sub-multiset A of mu with len(A) <= max_len."""
    mult = sorted(mu.multiplicities().items(), reverse=True)

    def rec(i: int, acc: list, count: int, left: int):
        if i == len(mult):
            yield tuple(acc), count
            return
        part, m = mult[i]
        for take in range(0, min(m, left) + 1):
            ff = factorial(m) // factorial(m - take)
            yield from rec(i + 1, acc + [part] * take, count * ff, left - take)

    yield from rec(0, [], 1, max_len)


def _partitions_max_len(w: int, max_len: int):
    if w == 0:
        yield ()
        return
    if max_len <= 0:
        return
    for lam in enumerate_partitions(w):
        if len(lam) <= max_len:
            yield tuple(lam)


def _remove(mu: tuple, sub: tuple) -> list:
    rest = list(mu)
    for a in sub:
        rest.remove(a)
    return rest


_U0 = Poly.var("U0")


def quantize_block(density: Density, p: int, d: int) -> ExactMatrix:
    """Matrix of the mode-p part of the normally ordered density, from weight d to weight d+p."""
    target = d + p
    src = basis(d)
    tgt = basis(target)
    if not src or not tgt:
        return ExactMatrix.zeros(len(tgt), len(src))
    tindex = index_of(target)
    real: dict[tuple[int, int], Poly] = {}
    imag: dict[tuple[int, int], Poly] = {}
    for col, mu in enumerate(src):
        for orders, coeff in sorted(density.terms.items()):
            n = len(orders)
            if n == 0:
                if p == 0:
                    cell = (col, col)
                    real[cell] = real.get(cell, Poly()) + coeff
                continue
            jtot = sum(orders)
            acc = imag if jtot % 2 else real
            # i^J = (-1)^(J//2) * (i if J odd)
            isign = -1 if (jtot // 2) % 2 else 1
            for ann, count in _sub_multisets(mu, n):
                cw = p + sum(ann)
                if cw < 0:
                    continue
                ann_factor = count
                for a in ann:
                    ann_factor *= a
                rest = _remove(mu, ann)
                for cre in _partitions_max_len(cw, n - len(ann)):
                    z0 = n - len(ann) - len(cre)
                    modes = tuple(sorted(cre + tuple(-a for a in ann) + (0,) * z0))
                    s = ordering_sum(orders, modes)
                    if not s:
                        continue
                    lam = Partition(sorted(rest + list(cre), reverse=True))
                    row = tindex[lam]
                    term = coeff * (isign * s * ann_factor)
                    if len(ann):
                        term = term.shift("h", 2 * len(ann))
                    if z0:
                        term = term * _U0 ** z0
                    cell = (row, col)
                    acc[cell] = acc.get(cell, Poly()) + term
    if any(v for v in imag.values()):
        raise FockError("quantized block has a non-vanishing imaginary part")
    grid = [[Poly()] * len(src) for _ in tgt]
    for (r, c), v in real.items():
        grid[r][c] = v
    return ExactMatrix(grid, len(tgt), len(src))


def quantize(density: Density, p: int, dmax: int) -> list[OperatorBlock]:
    """Mode-p blocks for source weights 0..dmax (empty matrices where d+p < 0)."""
    return [OperatorBlock(p, d, quantize_block(density, p, d)) for d in range(dmax + 1)]


def adjoint_defect(block_p: ExactMatrix, block_mp: ExactMatrix, d: int, p: int) -> ExactMatrix:
    """M_p^T W_{d+p} - W_d M_{-p} for M_p: weight d -> d+p and M_{-p}: d+p -> d."""
    wt = weight_matrix(d + p)
    ws = weight_matrix(d)
    return block_p.transpose().matmul(wt) - ws.matmul(block_mp)


# -- basis changes ------------------------------------------------------------------


def to_t_basis(m: ExactMatrix, src: int, tgt: int) -> ExactMatrix:
    """Conjugate a monomial-basis block into the T_mu = q_mu/h^len basis."""
    rows = basis(tgt)
    cols = basis(src)
    return ExactMatrix(
        [[m[i, j].shift("h", len(rows[i]) - len(cols[j])) if m[i, j] else m[i, j]
          for j in range(len(cols))] for i in range(len(rows))],
        len(rows), len(cols),
    )


def t_to_schur(m: ExactMatrix, k: int) -> ExactMatrix:
    """B^{-1} M B for a weight-preserving T-basis operator."""
    b = ExactMatrix([[Poly.const(x) for x in row] for row in schur_matrix(k)])
    binv = ExactMatrix([[Poly.const(x) for x in row] for row in schur_matrix_inverse(k)])
    return binv.matmul(m).matmul(b)


def schur_to_t(m: ExactMatrix, k: int) -> ExactMatrix:
    b = ExactMatrix([[Poly.const(x) for x in row] for row in schur_matrix(k)])
    binv = ExactMatrix([[Poly.const(x) for x in row] for row in schur_matrix_inverse(k)])
    return b.matmul(m).matmul(binv)


def apply(m: ExactMatrix, vec: Iterable) -> list[Poly]:
    return m.apply(list(vec))
