"""Young-Jucys-Murphy elements, the class algebra of S_k and the Frobenius map.

Permutations of {0, ..., k-1} are tuples g with g[i] the image of i; products
are composition (g*h)(i) = g(h(i)).  Contents are col - row, which is the
convention the brute-force computation singles out: J_2 acts on the trivial
representation of S_2 by +1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial

from . import fock
from .exact import ExactMatrix, ExactSeries, Poly, exp_series
from .hamiltonians import dispersionless_block
from .partitions import (
    Partition,
    beta_coeff,
    character,
    class_size,
    eval_ascending,
    enumerate_partitions,
    faulhaber,
    index_of,
)

BRUTE_FORCE_MAX = 6
CONTENT_CONVENTION = "col-row"
M0_CONVENTION = "J_i^0 = identity for every i, so sum_i J_i^0 = k * identity"


class YJMError(RuntimeError):
    pass


def cycle_type(g: tuple) -> Partition:
    seen = [False] * len(g)
    lengths = []
    for i in range(len(g)):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = g[j]
                n += 1
            lengths.append(n)
    return Partition(sorted(lengths, reverse=True))


def compose(g: tuple, h: tuple) -> tuple:
    return tuple(g[i] for i in h)


def inverse(g: tuple) -> tuple:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def transposition(k: int, a: int, b: int) -> tuple:
    g = list(range(k))
    g[a], g[b] = g[b], g[a]
    return tuple(g)


def ga_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for g, a in x.items():
        for h, b in y.items():
            gh = compose(g, h)
            out[gh] = out.get(gh, 0) + a * b
    return {g: v for g, v in out.items() if v}


def ga_add(x: dict, y: dict) -> dict:
    out = dict(x)
    for g, v in y.items():
        out[g] = out.get(g, 0) + v
    return {g: v for g, v in out.items() if v}


def yjm_element(k: int, i: int) -> dict:
    """J_i = (1,i) + ... + (i-1,i), 1-based i."""
    return {transposition(k, j, i - 1): Fraction(1) for j in range(i - 1)}


def identity(k: int) -> tuple:
    return tuple(range(k))


@dataclass
class ClassAlgebraElement:
    k: int
    coeffs: dict  # Partition -> Fraction, coefficient of the class sum C_mu

    def eigenvalue(self, lam) -> Fraction:
        """Scalar by which the element acts on the irreducible lam."""
        lam = Partition(lam)
        dim = character(lam, [1] * self.k)
        total = Fraction(0)
        for mu, c in self.coeffs.items():
            total += c * class_size(mu) * character(lam, mu)
        return total / dim


def to_class_element(x: dict, k: int) -> ClassAlgebraElement:
    """Check that x is constant on conjugacy classes and return its class-sum coefficients."""
    by_class: dict = {}
    for g in permutations(range(k)):
        mu = cycle_type(g)
        v = x.get(g, Fraction(0))
        if mu in by_class:
            if by_class[mu] != v:
                raise YJMError(f"element is not a class function (class {mu.label()})")
        else:
            by_class[mu] = v
    return ClassAlgebraElement(k, {mu: v for mu, v in by_class.items() if v})


def class_sum(mu) -> dict:
    mu = Partition(mu)
    k = mu.weight
    return {g: Fraction(1) for g in permutations(range(k)) if cycle_type(g) == mu}


@lru_cache(maxsize=None)
def _power_sums(k: int, mmax: int) -> tuple:
    if k > BRUTE_FORCE_MAX:
        raise ValueError(f"brute force is limited to k <= {BRUTE_FORCE_MAX}")
    e = {identity(k): Fraction(1)}
    js = [yjm_element(k, i) for i in range(1, k + 1)]
    powers = [dict(e) for _ in js]
    out = []
    for m in range(mmax + 1):
        total: dict = {}
        for p in powers:
            total = ga_add(total, p)
        out.append(total)
        powers = [ga_mul(p, j) if j else {} for p, j in zip(powers, js)]
    return tuple(out)


def yjm_powersum_group(k: int, m: int) -> dict:
    """J_1^m + ... + J_k^m as a group-algebra element (J_1 = 0, J_1^0 = identity)."""
    return _power_sums(k, max(m, 8))[m]


def yjm_powersum_brute(k: int, m: int) -> ClassAlgebraElement:
    return to_class_element(yjm_powersum_group(k, m), k)


def is_central(x: dict, k: int) -> bool:
    for mu in enumerate_partitions(k):
        c = class_sum(mu)
        if ga_mul(x, c) != ga_mul(c, x):
            return False
    return True


def content_power_sum(lam, m: int) -> Fraction:
    return Fraction(sum(c ** m for c in Partition(lam).contents()))


def frobenius_power_sum(lam, m: int) -> Fraction:
    """sum_i (delta_{m,0} + sum_{l<=a_i} l^m + (-1)^m sum_{l<=b_i} l^m) via Faulhaber polynomials."""
    a, b = Partition(lam).frobenius()
    f = faulhaber(m)
    total = Fraction(0)
    for ai, bi in zip(a, b):
        total += int(m == 0)
        total += eval_ascending(f, ai) / (m + 1)
        total += (-1) ** m * eval_ascending(f, bi) / (m + 1)
    return total


def yjm_eigen(lam, m: int) -> Fraction:
    direct = content_power_sum(lam, m)
    frob = frobenius_power_sum(lam, m)
    if direct != frob:
        raise YJMError(f"content and Frobenius forms disagree for {Partition(lam).label()}, m={m}")
    return direct


# -- Frobenius map and the generating identity ------------------------------------------------


def multiplication_matrix(x: dict, k: int) -> list[list[Fraction]]:
    """M[gamma][nu]: coefficient of C_gamma in x * C_nu."""
    parts = enumerate_partitions(k)
    reps = {}
    for g in permutations(range(k)):
        reps.setdefault(cycle_type(g), g)
    idx = index_of(k)
    mat = [[Fraction(0)] * len(parts) for _ in parts]
    for gamma in parts:
        g = reps[gamma]
        # coefficient of g in x * C_nu = sum_y x[y] [y^{-1} g in C_nu]
        for y, v in x.items():
            nu = cycle_type(compose(inverse(y), g))
            mat[idx[gamma]][idx[nu]] += v
    return mat


def frobenius_conjugate(x: dict, k: int) -> ExactMatrix:
    """Phi x Phi^{-1} on weight k in the T basis, Phi(C_mu) = |C_mu| T_mu / k!."""
    parts = enumerate_partitions(k)
    mat = multiplication_matrix(x, k)
    return ExactMatrix(
        [[Poly.const(mat[i][j] * class_size(parts[i]) / class_size(parts[j])) for j in range(len(parts))]
         for i in range(len(parts))]
    )


def frobenius_image(elem: ClassAlgebraElement) -> list[Fraction]:
    """T-basis coefficients of Phi(element)."""
    parts = enumerate_partitions(elem.k)
    return [elem.coeffs.get(mu, Fraction(0)) * Fraction(class_size(mu), factorial(elem.k)) for mu in parts]


def character_element(lam) -> ClassAlgebraElement:
    lam = Partition(lam)
    return ClassAlgebraElement(lam.weight, {mu: Fraction(character(lam, mu)) for mu in enumerate_partitions(lam.weight)})


def _sinh_half_times_2z(order: int) -> list[Fraction]:
    """Coefficients of 2 z sinh(z/2)."""
    out = [Fraction(0)] * order
    for n in range(order):
        p = 2 * n + 2
        if p < order:
            out[p] = Fraction(2, 2 ** (2 * n + 1) * factorial(2 * n + 1))
    return out


def prop_a1_lhs(k: int, zorder: int) -> list[ExactMatrix]:
    """z-coefficients 0..zorder of 1 + sum_m (z/sqrt(hbar))^(m+2) H_m^{[0]} on weight k, T basis."""
    n = len(enumerate_partitions(k))
    out = [ExactMatrix.identity(n)]
    for zp in range(1, zorder + 1):
        m = zp - 2
        blk = fock.to_t_basis(dispersionless_block(m, k, max(m, zorder - 2)), k, k)
        out.append(blk.map(lambda x: x.shift("h", -zp)))
    return out


def prop_a1_rhs(k: int, zorder: int, brute: bool = True) -> list[ExactMatrix]:
    order = zorder + 1
    parts = enumerate_partitions(k)
    n = len(parts)
    # Sum_m z^m/m! Phi(P_m) Phi^{-1}
    if brute:
        ps = [frobenius_conjugate(yjm_powersum_group(k, m), k) if k else ExactMatrix.zeros(n, n)
              for m in range(order)]
    else:
        b = ExactMatrix([[Poly.const(x) for x in row] for row in fock.schur_matrix(k)])
        binv = ExactMatrix([[Poly.const(x) for x in row] for row in fock.schur_matrix_inverse(k)])
        ps = [b.matmul(ExactMatrix.diagonal([Poly.const(yjm_eigen(lam, m)) for lam in parts])).matmul(binv)
              for m in range(order)]
    two_z_sinh = _sinh_half_times_2z(order)
    inner = []
    for zp in range(order):
        acc = ExactMatrix.identity(n, beta_coeff(zp))
        for j in range(zp + 1):
            c = two_z_sinh[j]
            if c:
                acc = acc + ps[zp - j].scale(c / factorial(zp - j))
        inner.append(acc)
    ex = exp_series(Poly.monomial(1, z=1, U0=1, h=-1), "z", order)
    out = []
    for zp in range(order):
        acc = ExactMatrix.zeros(n, n)
        for j in range(zp + 1):
            acc = acc + inner[zp - j].scale(ex.coeffs[j])
        out.append(acc)
    return out


@dataclass
class PropA1Report:
    k: int
    zorder: int
    route: str
    defect_orders: list

    @property
    def ok(self) -> bool:
        return not self.defect_orders

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "zorder": self.zorder,
            "route": self.route,
            "defect_orders": self.defect_orders,
            "ok": self.ok,
            "content_convention": CONTENT_CONVENTION,
            "m0_convention": M0_CONVENTION,
        }


def verify_propA1(k: int, zorder: int, brute: bool | None = None) -> PropA1Report:
    if brute is None:
        brute = k <= BRUTE_FORCE_MAX
    if brute and k > BRUTE_FORCE_MAX:
        raise ValueError(f"brute force is limited to k <= {BRUTE_FORCE_MAX}")
    lhs = prop_a1_lhs(k, zorder)
    rhs = prop_a1_rhs(k, zorder, brute)
    bad = [zp for zp in range(zorder + 1) if lhs[zp] != rhs[zp]]
    return PropA1Report(k, zorder, "group-algebra" if brute else "content-eigenvalues", bad)


def auxiliary_identity(a: int, b: int, order: int = 11) -> bool:
    """e^{z(a+1/2)} - e^{-z(b+1/2)} = 2 sinh(z/2) ((e^{az}-1)/(1-e^{-z}) + (e^{-bz}-1)/(1-e^z) + 1)."""
    half = Fraction(1, 2)

    def ex(c) -> ExactSeries:
        return ExactSeries("z", [Fraction(c) ** n / factorial(n) for n in range(order + 1)], order + 1)

    def shifted_ratio(num: ExactSeries, den: ExactSeries) -> ExactSeries:
        # both start at z^1: divide the shifted series
        nn = ExactSeries("z", num.coeffs[1:], order)
        dd = ExactSeries("z", den.coeffs[1:], order)
        return nn * dd.reciprocal()

    lhs = (ex(a + half) - ex(-(b + half))).truncate(order)
    sinh2 = (ex(half) - ex(-half)).truncate(order)
    one = ExactSeries.one("z", order + 1)
    t1 = shifted_ratio(ex(a) - one, one - ex(-1))
    t2 = shifted_ratio(ex(-b) - one, one - ex(1))
    rhs = sinh2 * (t1 + t2 + 1)
    return lhs == rhs.truncate(order)


def faulhaber_generating_identity(x: int, order: int = 9) -> bool:
    """sum_m F_{m+1}(x) z^m/(m+1)! = (e^{zx} - 1)/(1 - e^{-z})."""
    left = ExactSeries("z", [eval_ascending(faulhaber(m), x) / factorial(m + 1) for m in range(order)], order)
    num = ExactSeries("z", [Fraction(x) ** (n + 1) / factorial(n + 1) for n in range(order)], order)
    den = ExactSeries("z", [Fraction(-(-1) ** (n + 1)) / factorial(n + 1) for n in range(order)], order)
    return left == num * den.reciprocal()
