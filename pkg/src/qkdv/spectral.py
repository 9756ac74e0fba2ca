"""The joint spectral problem in the scaled variables (sigma, V0).

With T_k = q_k/sqrt(hbar), U0 = sqrt(hbar) V0, eps^2 = -sigma sqrt(hbar) and
H_m = sqrt(hbar)^(m+2) K_m, the operators K_m have entries in Q[sigma, V0].
The deformed Schur functions r_lam(T; sigma) are their common eigenvectors,
built order by order in sigma from the simple spectrum of K_{m*}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import fock
from .exact import ExactMatrix, ExactSeries, Poly, charpoly
from .hamiltonians import HamiltonianRecord
from .partitions import Partition, enumerate_partitions, q_function

SIGMA = Poly.var("sigma")
V0 = Poly.var("V0")


class SpectralError(RuntimeError):
    pass


def _scale_entry(x: Poly, shift: int) -> Poly:
    """eps2 -> -sigma h, U0 -> h V0, times h^shift; must end up h-free."""
    out = {}
    for key, c in x.raw_terms.items():
        exps = list(_unpack(key))
        h, e, u = exps[0], exps[1], exps[2]
        if e % 1:
            raise SpectralError("fractional eps2 exponent")
        new = exps[:]
        new[0] = h + e + u + shift
        new[1] = 0
        new[2] = 0
        new[3] += e
        new[4] += u
        coeff = c * (-1) ** e
        out[tuple(new)] = out.get(tuple(new), 0) + coeff
    p = Poly.from_terms(out.items())
    if not p.free_of("h"):
        raise SpectralError(f"scaled entry {p} still depends on h (homogeneity violated)")
    return p


def _unpack(key):
    from .exact.poly import unpack

    return unpack(key)


def scale_t_basis(mat: ExactMatrix, m: int, k: int, with_v0: bool = True) -> ExactMatrix:
    """K_m on weight k in the T_mu basis."""
    parts = fock.basis(k)
    rows = []
    for i, lam in enumerate(parts):
        row = []
        for j, mu in enumerate(parts):
            x = mat[i, j]
            row.append(_scale_entry(x, len(lam) - len(mu) - (m + 2)) if x else Poly())
        rows.append(row)
    out = ExactMatrix(rows, len(parts), len(parts))
    if not with_v0:
        out = out.evaluate(V0=0)
    return out


@dataclass
class ScaledOperator:
    m: int
    k: int
    matrix: ExactMatrix  # Schur basis
    t_matrix: ExactMatrix  # T_mu basis


def scale(record: HamiltonianRecord, k: int, with_v0: bool = True) -> ScaledOperator:
    t = scale_t_basis(record.p0(k), record.m, k, with_v0)
    return ScaledOperator(record.m, k, fock.t_to_schur(t, k), t)


def dispersionless_eigen(m: int, lam) -> Poly:
    """F_m^{[0]}(lam; V0) = sum_j V0^(m+2-j)/(m+2-j)! Q_j(lam)."""
    out = Poly()
    for j in range(m + 3):
        q = q_function(j, lam)
        if q:
            out = out + Poly.monomial(q / factorial(m + 2 - j), V0=m + 2 - j)
    return out


def mstar_search(k: int, bound: int = 20) -> int:
    parts = enumerate_partitions(k)
    for m in range(0, bound + 1):
        vals = [dispersionless_eigen(m, lam) for lam in parts]
        if len(set(vals)) == len(vals):
            return m
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            if dispersionless_eigen(bound, a) == dispersionless_eigen(bound, b):
                raise SpectralError(f"m* search exceeded {bound}: {a.label()} and {b.label()} unseparated")
    raise SpectralError("m* search failed")


# -- deformed Schur functions -----------------------------------------------------------


def sigma_slices(mat: ExactMatrix, order: int) -> list[ExactMatrix]:
    """[K^{[0]}, ..., K^{[order-1]}] with K = sum_j sigma^j K^{[j]}."""
    return [mat.coeff("sigma", j) for j in range(order)]


@dataclass
class DeformedSchur:
    lam: Partition
    order: int
    coeffs: list  # coeffs[nu index] -> ExactSeries in sigma
    eigen: dict = field(default_factory=dict)  # m -> ExactSeries in sigma

    def coefficient(self, nu) -> ExactSeries:
        return self.coeffs[fock.basis(self.lam.weight).index(Partition(nu))]

    def to_json(self) -> dict:
        parts = fock.basis(self.lam.weight)
        return {
            "lambda": list(self.lam),
            "order": self.order,
            "coefficients": {
                nu.label(): [str(c.constant_term()) for c in s.coeffs]
                for nu, s in zip(parts, self.coeffs)
            },
            "eigenvalues": {
                str(m): [c.to_json() for c in s.coeffs] for m, s in sorted(self.eigen.items())
            },
        }


def deformed_schur(k: int, order: int, operators: dict[int, ScaledOperator], mstar: int | None = None) -> list[DeformedSchur]:
    """All r_lam of weight k to sigma-order ``order`` (exclusive), with eigenvalues of every operator given."""
    mstar = mstar_search(k) if mstar is None else mstar
    if mstar not in operators:
        raise SpectralError(f"K_{mstar} needed for weight {k}")
    parts = fock.basis(k)
    n = len(parts)
    ks = sigma_slices(operators[mstar].matrix, order)
    k0 = ks[0]
    f0 = [dispersionless_eigen(mstar, lam) for lam in parts]
    if not k0.is_diagonal() or k0.diag() != f0:
        raise SpectralError("sigma^0 part of the scaled operator is not the dispersionless spectrum")
    out = []
    for li, lam in enumerate(parts):
        r = [[Fraction(int(i == li)) for i in range(n)]]
        fser = [f0[li]]
        for kk in range(1, order):
            # K^{[j]} r^{[kk-j]} for j = 1..kk
            acc = [Poly() for _ in range(n)]
            for j in range(1, kk + 1):
                kj = ks[j]
                vec = r[kk - j]
                for a in range(n):
                    row = kj.entries[a]
                    s = Poly()
                    for b in range(n):
                        if vec[b] and row[b]:
                            s = s + row[b] * vec[b]
                    acc[a] = acc[a] + s
            fk = acc[li]
            new = [Fraction(0)] * n
            for mi in range(n):
                if mi == li:
                    continue
                rhs = acc[mi]
                for j in range(1, kk):
                    if r[kk - j][mi]:
                        rhs = rhs - fser[j] * r[kk - j][mi]
                gap = f0[li] - f0[mi]
                if not gap:
                    raise SpectralError(f"zero gap between {lam.label()} and {parts[mi].label()}")
                try:
                    q = rhs.divide_exact(gap)
                except ArithmeticError:
                    raise SpectralError(
                        f"r coefficient ({lam.label()}, {parts[mi].label()}) at order {kk} depends on V0"
                    ) from None
                if not q.is_constant():
                    raise SpectralError(
                        f"r coefficient ({lam.label()}, {parts[mi].label()}) at order {kk} depends on V0"
                    )
                new[mi] = q.constant_term()
            r.append(new)
            fser.append(fk)
        coeffs = [ExactSeries("sigma", [r[kk][i] for kk in range(order)], order) for i in range(n)]
        ds = DeformedSchur(lam, order, coeffs)
        ds.eigen[mstar] = ExactSeries("sigma", fser, order)
        out.append(ds)
    for m, op in operators.items():
        if m == mstar:
            continue
        attach_eigen(out, op, order)
    return out


def apply_series(op: ScaledOperator, ds: DeformedSchur, order: int) -> list[ExactSeries]:
    """K_m r_lam as a list of sigma-series (one per Schur component)."""
    ks = sigma_slices(op.matrix, order)
    n = len(ds.coeffs)
    out = []
    for a in range(n):
        coeffs = []
        for kk in range(order):
            s = Poly()
            for j in range(kk + 1):
                row = ks[j].entries[a]
                for b in range(n):
                    c = ds.coeffs[b].coeffs[kk - j]
                    if c and row[b]:
                        s = s + row[b] * c
            coeffs.append(s)
        out.append(ExactSeries("sigma", coeffs, order))
    return out


def attach_eigen(family: list[DeformedSchur], op: ScaledOperator, order: int) -> None:
    for ds in family:
        li = fock.basis(ds.lam.weight).index(ds.lam)
        ds.eigen[op.m] = apply_series(op, ds, order)[li]


def eigen_residual(op: ScaledOperator, ds: DeformedSchur, order: int) -> list[ExactSeries]:
    """K_m r_lam - F_m(lam) r_lam; all zero when r_lam is an eigenvector."""
    applied = apply_series(op, ds, order)
    f = ds.eigen[op.m]
    return [a - f * c for a, c in zip(applied, ds.coeffs)]


def inner_series(a: DeformedSchur, b: DeformedSchur) -> ExactSeries:
    """<r_a, r_b> in the orthonormal Schur basis, as a sigma-series."""
    order = min(a.order, b.order)
    out = ExactSeries("sigma", [], order)
    for x, y in zip(a.coeffs, b.coeffs):
        out = out + x * y
    return out


def conjugation_defect(family: dict[Partition, DeformedSchur]) -> list[tuple]:
    """Pairs (lam, nu) with r_{lam', nu'}(sigma) != r_{lam, nu}(-sigma)."""
    bad = []
    for lam, ds in family.items():
        conj = family[lam.conjugate()]
        parts = fock.basis(lam.weight)
        for nu, s in zip(parts, ds.coeffs):
            other = conj.coefficient(nu.conjugate())
            flipped = ExactSeries("sigma", [c * (-1) ** i for i, c in enumerate(s.coeffs)], s.order)
            if other != flipped:
                bad.append((lam, nu))
    return bad


# -- curves, genus formula, large sigma ------------------------------------------------------


@dataclass
class SpectralCurve:
    k: int
    m: int
    poly: Poly

    def coefficient_table(self) -> list[tuple[int, int, Fraction]]:
        """(sigma power, rho power, coefficient), sorted."""
        from .exact.poly import var_index

        si, ri = var_index("sigma"), var_index("rho")
        return sorted((e[si], e[ri], c) for e, c in self.poly.terms())

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "poly": self.poly.to_json(),
            "table": [[s, r, str(c)] for s, r, c in self.coefficient_table()],
        }


def spectral_curve(record: HamiltonianRecord, k: int) -> SpectralCurve:
    t = scale_t_basis(record.p0(k), record.m, k, with_v0=False)
    return SpectralCurve(k, record.m, charpoly(t, "rho"))


def conjecture_rhs(k: int) -> int:
    """(k - 1) p(k) + 1 - sum of lengths over partitions of k."""
    parts = enumerate_partitions(k)
    return (k - 1) * len(parts) + 1 - sum(len(p) for p in parts)


@dataclass
class SigmaInfinityReport:
    k: int
    m: int
    sigma_degree: int
    diagonal: bool
    entries: dict
    reference: dict
    slope: Fraction | None
    offset: Fraction | None
    affine: bool

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "sigma_degree": self.sigma_degree,
            "diagonal": self.diagonal,
            "entries": {lam.label(): str(v) for lam, v in self.entries.items()},
            "reference": {lam.label(): str(v) for lam, v in self.reference.items()},
            "slope": None if self.slope is None else str(self.slope),
            "offset": None if self.offset is None else str(self.offset),
            "affine": self.affine,
        }


def sigma_infinity_diag(record: HamiltonianRecord, k: int) -> SigmaInfinityReport | str:
    t = scale_t_basis(record.p0(k), record.m, k, with_v0=False)
    deg = max((x.degree("sigma") for row in t.entries for x in row), default=-1)
    if deg <= 0:
        return "sigma-independent"
    lead = t.coeff("sigma", deg)
    if not lead.is_diagonal():
        raise SpectralError(f"leading sigma^{deg} matrix of K_{record.m} on weight {k} is not diagonal")
    parts = fock.basis(k)
    entries = {lam: lead[i, i].constant_term() for i, lam in enumerate(parts)}
    ref = {lam: Fraction(sum(x ** (2 * record.m + 1) for x in lam)) for lam in parts}
    slope = offset = None
    affine = False
    xs = sorted(set(ref.values()))
    if len(xs) >= 2:
        a, b = xs[0], xs[-1]
        ea = next(entries[l] for l in parts if ref[l] == a)
        eb = next(entries[l] for l in parts if ref[l] == b)
        slope = (eb - ea) / (b - a)
        offset = ea - slope * a
        affine = all(entries[l] == slope * ref[l] + offset for l in parts)
    elif len(xs) == 1:
        offset = None
        affine = True
    return SigmaInfinityReport(k, record.m, deg, True, entries, ref, slope, offset, affine)
