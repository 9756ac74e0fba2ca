"""Character vanishing identities for partitions with equal dispersionless eigenvalues."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import fock
from .exact import Poly
from .hamiltonians import HamiltonianRecord
from .partitions import (
    Partition,
    character,
    class_size,
    enumerate_partitions,
    p_function,
    q_function,
)


@dataclass(frozen=True)
class DegeneratePair:
    k: int
    lam: Partition
    mu: Partition
    shared_invariant: Fraction

    def label(self) -> str:
        return f"{self.lam.label()} ~ {self.mu.label()}"


def find_pairs(kmax: int, j: int = 2, kmin: int = 1) -> list[DegeneratePair]:
    """Distinct pairs of equal weight with equal P_j, listed in canonical order."""
    out = []
    for k in range(kmin, kmax + 1):
        parts = enumerate_partitions(k)
        vals = [p_function(j, lam) for lam in parts]
        for a in range(len(parts)):
            for b in range(a + 1, len(parts)):
                if vals[a] == vals[b]:
                    out.append(DegeneratePair(k, parts[a], parts[b], vals[a]))
    return out


def find_p2_pairs(kmax: int) -> list[DegeneratePair]:
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    return find_pairs(kmax, 2)


def corollary_sum(lam, mu) -> int:
    """sum_nu |C_nu| chi_lam(nu) chi_mu(nu) sum_i nu_i^3."""
    lam, mu = Partition(lam), Partition(mu)
    if lam == mu:
        raise ValueError("the identity concerns distinct partitions")
    if lam.weight != mu.weight:
        raise ValueError("partitions of different weights")
    total = 0
    for nu in enumerate_partitions(lam.weight):
        total += class_size(nu) * character(lam, nu) * character(mu, nu) * sum(x ** 3 for x in nu)
    return total


def verify_corollary(pair: DegeneratePair) -> int:
    return corollary_sum(pair.lam, pair.mu)


def verify_lemma34(pair: DegeneratePair, m: int, record: HamiltonianRecord) -> Poly:
    """<s_lam(q/sqrt(hbar)), H_m^{[1]}|_{U0=0} s_mu(q/sqrt(hbar))>."""
    if record.m != m:
        raise ValueError(f"record is H_{record.m}, not H_{m}")
    if q_function(m + 2, pair.lam) != q_function(m + 2, pair.mu):
        raise ValueError(f"Q_{m + 2} differs on {pair.label()}; the vanishing statement does not apply")
    k = pair.k
    block = record.p0(k).evaluate(U0=0).coeff("eps2", 1)
    sl = fock.schur_q_vector(pair.lam)
    sm = fock.schur_q_vector(pair.mu)
    return fock.inner(sl, block.apply(sm), k)


def lemma34_from_corollary(pair: DegeneratePair) -> Poly:
    """-(hbar/12) * corollary / k!, the value the m = 1 matrix element must take."""
    return Poly.monomial(Fraction(-verify_corollary(pair), 12 * factorial(pair.k)), h=2)


def content_sum(lam) -> int:
    return sum(Partition(lam).contents())
