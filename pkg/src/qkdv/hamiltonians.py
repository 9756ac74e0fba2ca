"""Quantum KdV Hamiltonians as exact operator blocks.

Three sources of Hamiltonians:

* the explicit densities h_{-1}, h_0, h_1;
* the dispersionless tower H_m^{[0]} from Eliashberg's generating function;
* dispersive h_2, h_3, ... from the Buryak-Rossi recursion
  d/dx (D - 1) h_{m+1} = (1/hbar) [h_m, H_1], applied mode by mode to the
  operator blocks and followed by a fit back to a density.

Blocks are keyed by (p, d): mode p acting from weight d to weight d + p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import fock
from .density import Density, lenard_magri, monomials
from .exact import ExactMatrix, Poly, solve_rational
from .exact.linalg import InconsistentSystem, RankDeficient
from .partitions import Partition, beta_coeff, index_of

H = Poly.var("h")
HBAR = Poly.var("h", 2)
EPS2 = Poly.var("eps2")
U0 = Poly.var("U0")

EXPLICIT = "explicit"
DISPERSIONLESS = "eliashberg-dispersionless"
BR = "br-recursion"


class HamiltonianError(RuntimeError):
    pass


def explicit_density(m: int) -> Density:
    """h_{-1} = u, h_0 = u^2/2 - hbar/24, h_1 = u^3/6 - hbar u/24 + eps2/24 u u_xx - hbar eps2/2880."""
    u = Density.u()
    if m == -1:
        return u
    if m == 0:
        return u * u * Fraction(1, 2) + Density.const(HBAR * Fraction(-1, 24))
    if m == 1:
        return (
            u * u * u * Fraction(1, 6)
            + u * (HBAR * Fraction(-1, 24))
            + u * Density.u(2) * (EPS2 * Fraction(1, 24))
            + Density.const(HBAR * EPS2 * Fraction(-1, 2880))
        )
    raise ValueError("explicit densities exist for m = -1, 0, 1 only")


@dataclass
class HamiltonianRecord:
    m: int
    provenance: str
    density: Density | None = None
    constant_convention: str = "exact"
    blocks: dict = field(default_factory=dict)

    def block(self, p: int, d: int) -> ExactMatrix:
        key = (p, d)
        if key not in self.blocks:
            if self.density is None:
                raise HamiltonianError(
                    f"block p={p}, weight {d} of H_{self.m} not available; enlarge truncation"
                )
            self.blocks[key] = fock.quantize_block(self.density, p, d)
        return self.blocks[key]

    def p0(self, d: int) -> ExactMatrix:
        return self.block(0, d)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "provenance": self.provenance,
            "constant_convention": self.constant_convention,
            "density": None if self.density is None else self.density.to_json(),
            "blocks": [
                fock.OperatorBlock(p, d, mat).to_json()
                for (p, d), mat in sorted(self.blocks.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HamiltonianRecord":
        rec = cls(
            int(data["m"]),
            data["provenance"],
            None if data["density"] is None else Density.from_json(data["density"]),
            data["constant_convention"],
        )
        for b in data["blocks"]:
            blk = fock.OperatorBlock.from_json(b)
            rec.blocks[(blk.p, blk.source_weight)] = blk.matrix
        return rec


def explicit_record(m: int) -> HamiltonianRecord:
    return HamiltonianRecord(m, EXPLICIT, explicit_density(m))


# -- dispersionless tower -------------------------------------------------------------


@lru_cache(maxsize=None)
def _s_product(ks: tuple[int, ...], order: int) -> tuple[Fraction, ...]:
    """Coefficients c_j with prod_a S(x k_a) = sum_j c_j x^(2j), j < order."""
    out = [Fraction(0)] * order
    out[0] = Fraction(1)
    for k in ks:
        s = [Fraction(k ** (2 * i), 4 ** i * factorial(2 * i + 1)) for i in range(order)]
        new = [Fraction(0)] * order
        for i, a in enumerate(out):
            if a:
                for j in range(order - i):
                    new[i + j] += a * s[j]
        out = new
    return tuple(out)


def _mult_factorials(parts) -> int:
    out = 1
    for m in Partition(sorted(parts, reverse=True)).multiplicities().values():
        out *= factorial(m)
    return out


def eliashberg_series(d: int, zmax: int) -> list[ExactMatrix]:
    """Coefficients of z^0..z^zmax of 1 + sum_m z^(m+2) H_m^{[0]} on weight d."""
    src = fock.basis(d)
    idx = index_of(d)
    n = len(src)
    # entries[z_power][(row, col)] -> Poly in h, U0
    grid = [dict() for _ in range(zmax + 1)]
    for col, mu in enumerate(src):
        for ann, count in fock._sub_multisets(mu, zmax):
            w = sum(ann)
            ann_factor = count
            for a in ann:
                ann_factor *= a
            rest = fock._remove(mu, ann)
            for cre in fock._partitions_max_len(w, zmax - len(ann)):
                nmodes = len(ann) + len(cre)
                if nmodes > zmax:
                    continue
                lam = Partition(sorted(rest + list(cre), reverse=True))
                row = idx[lam]
                base = Fraction(ann_factor, _mult_factorials(ann) * _mult_factorials(cre))
                ks = tuple(sorted(ann + cre))
                sprod = _s_product(ks, zmax // 2 + 1)
                for z0 in range(0, zmax - nmodes + 1):
                    ntot = nmodes + z0
                    for j, c in enumerate(sprod):
                        zp = ntot + 2 * j
                        if zp > zmax:
                            break
                        if not c:
                            continue
                        term = Poly.monomial(base * c / factorial(z0), h=2 * len(ann) + 2 * j, U0=z0)
                        cell = grid[zp]
                        cell[(row, col)] = cell.get((row, col), Poly()) + term
    # multiply by 1/S(h z) = sum_j beta_j h^j z^j
    out = []
    for zp in range(zmax + 1):
        acc: dict = {}
        for j in range(zp + 1):
            b = beta_coeff(j)
            if not b:
                continue
            for cell, v in grid[zp - j].items():
                acc[cell] = acc.get(cell, Poly()) + v * Poly.monomial(b, h=j)
        mat = [[Poly()] * n for _ in range(n)]
        for (r, c), v in acc.items():
            mat[r][c] = v
        out.append(ExactMatrix(mat, n, n))
    if out[0] != ExactMatrix.identity(n):
        raise HamiltonianError("z^0 coefficient of the generating series is not 1")
    if zmax >= 1 and out[1] != ExactMatrix.identity(n, U0):
        raise HamiltonianError("z^1 coefficient of the generating series is not U0")
    return out


@lru_cache(maxsize=None)
def _eliashberg_cached(d: int, zmax: int) -> tuple[ExactMatrix, ...]:
    return tuple(eliashberg_series(d, zmax))


def dispersionless_block(m: int, d: int, mmax: int | None = None) -> ExactMatrix:
    zmax = max(m, mmax if mmax is not None else m) + 2
    # share one expansion per weight for all m up to 8
    zmax = max(zmax, 10)
    return _eliashberg_cached(d, zmax)[m + 2]


def dispersionless_tower(mmax: int, kmax: int) -> dict[int, HamiltonianRecord]:
    out = {}
    for m in range(-1, mmax + 1):
        rec = HamiltonianRecord(m, DISPERSIONLESS)
        for d in range(kmax + 1):
            rec.blocks[(0, d)] = dispersionless_block(m, d, mmax)
        out[m] = rec
    return out


def dispersionless_record(m: int, kmax: int) -> HamiltonianRecord:
    rec = HamiltonianRecord(m, DISPERSIONLESS)
    for d in range(kmax + 1):
        rec.blocks[(0, d)] = dispersionless_block(m, d)
    return rec


# -- Buryak-Rossi recursion -------------------------------------------------------------


def br_block(block_p: ExactMatrix, h1_src: ExactMatrix, h1_tgt: ExactMatrix, m: int, p: int) -> ExactMatrix:
    """Mode-p block of h_{m+1} from the mode-p block of h_m.

    The commutator of normally ordered operators is i*hbar times the classical
    bracket, so the recursion reads, on the eps^(2a) component,
    (m + 2 + a) * block_{m+1} = -[block_m, H_1]^{(a)} / (hbar p).
    """
    if p == 0:
        raise ValueError("the recursion only determines p != 0 modes")
    comm = block_p.matmul(h1_src) - h1_tgt.matmul(block_p)

    def entry(x: Poly) -> Poly:
        out = Poly()
        for a, part in x.collect("eps2").items():
            out = out + part.shift("eps2", a) * Fraction(-1, p * (m + 2 + a))
        return out.shift("h", -2)

    return comm.map(entry)


def br_step(rec: HamiltonianRecord, kmax: int, modes: int, h1: HamiltonianRecord | None = None) -> dict:
    """Blocks of h_{m+1} for 0 < |p| <= modes on source weights with d, d+p <= kmax."""
    h1 = h1 or explicit_record(1)
    out = {}
    for p in list(range(-modes, 0)) + list(range(1, modes + 1)):
        for d in range(kmax + 1):
            if not 0 <= d + p <= kmax:
                continue
            out[(p, d)] = br_block(rec.block(p, d), h1.p0(d), h1.p0(d + p), rec.m, p)
    return out


def reconstruction_ansatz(m: int) -> dict[int, list[tuple]]:
    """Per eps^(2a): (key, b) for monomials with n + a + 2b = m + 2, n >= 1, even J <= 2(a+b)."""
    out: dict[int, list[tuple]] = {}
    for a in range(m + 2):
        for b in range((m + 2) // 2 + 1):
            n = m + 2 - a - 2 * b
            if n < 1:
                continue
            for j in range(0, 2 * (a + b) + 1, 2):
                for key in monomials(n, j):
                    out.setdefault(a, []).append((key, b))
    return out


def density_reconstruct(blocks: dict, m: int) -> Density:
    """Fit the density of h_m (without its constant) to mode blocks; exact or fatal."""
    ansatz = reconstruction_ansatz(m)
    result = Density()
    for a, items in sorted(ansatz.items()):
        # rows: (p, d, row, col, monomial key) ; columns: ansatz items
        images = []
        for key, b in items:
            dens = Density({key: Poly.var("h", 2 * b)})
            images.append({pd: fock.quantize_block(dens, *pd) for pd in blocks})
        eqs: dict = {}
        for i, img in enumerate(images):
            for pd, mat in img.items():
                for r, row in enumerate(mat.entries):
                    for c, x in enumerate(row):
                        for k, v in x.raw_terms.items():
                            eqs.setdefault((pd, r, c, k), {})[i] = v
        rhs: dict = {}
        for pd, mat in sorted(blocks.items()):
            part = mat.coeff("eps2", a)
            for r, row in enumerate(part.entries):
                for c, x in enumerate(row):
                    for k, v in x.raw_terms.items():
                        rhs[(pd, r, c, k)] = v
        keys = sorted(set(eqs) | set(rhs))
        rows = [[eqs.get(k, {}).get(i, Fraction(0)) for i in range(len(items))] for k in keys]
        b_vec = [rhs.get(k, Fraction(0)) for k in keys]
        try:
            sol = solve_rational(rows, b_vec, len(items))
        except InconsistentSystem as exc:
            raise HamiltonianError(
                f"density fit for h_{m} is inconsistent at eps^{2 * a} (equation {keys[exc.row]})"
            ) from exc
        except RankDeficient as exc:
            raise HamiltonianError(f"density fit for h_{m} is underdetermined at eps^{2 * a}: {exc}") from exc
        for (key, b), c in zip(items, sol):
            if c:
                result = result + Density({key: Poly.monomial(c, h=2 * b, eps2=a)})
    return result


def vacuum_constant(m: int) -> Poly:
    """The eps^0 vacuum constant of H_m at U0 = 0: beta_{m+2} hbar^((m+2)/2)."""
    return Poly.monomial(beta_coeff(m + 2), h=m + 2)


def fit_window(m: int) -> tuple[int, int]:
    """(kmax, modes) used for the fit of h_m.

    u-linear monomials u_{jx} differ on a single mode only by p^j, so the
    number of distinct |p| must exceed the number of admissible j (m + 2).
    """
    return max(6, m + 2), m + 2


def br_chain(mmax: int) -> dict[int, HamiltonianRecord]:
    """Records for m = -1..mmax; m >= 2 come from the recursion.

    Constants: the eps^0 constant is the exact dispersionless vacuum value.
    For the top record the eps > 0 constants are set to zero.  For every other
    m >= 2 they are read off from the u-linear part of h_{m+1}, by
    d h_{m+1}/du = h_m.
    """
    recs = {m: explicit_record(m) for m in (-1, 0, 1)}
    h1 = recs[1]
    top = max(mmax, 1)
    # build one step beyond mmax when needed so constants can be fixed
    target = top + 1 if top >= 2 else top
    for m in range(2, target + 1):
        kmax, modes = fit_window(m)
        blocks = br_step(recs[m - 1], kmax, modes, h1)
        dens = density_reconstruct(blocks, m)
        dens = dens + Density.const(vacuum_constant(m))
        rec = HamiltonianRecord(m, BR, dens, "eps0-exact;eps>0-zero")
        # cross-check: the fitted density reproduces every recursion block
        for pd, mat in blocks.items():
            if rec.block(*pd) != mat:
                raise HamiltonianError(f"refitted h_{m} disagrees with the recursion at {pd}")
        recs[m] = rec
    for m in range(2, target):
        linear = recs[m + 1].density.terms.get((0,), Poly())
        const = Poly()
        for a, part in linear.collect("eps2").items():
            if a == 0:
                continue
            const = const + part.shift("eps2", a)
        eps0 = recs[m].density.constant().coeff("eps2", 0)
        if linear.coeff("eps2", 0) != eps0:
            raise HamiltonianError(f"u-linear part of h_{m + 1} does not match the vacuum constant of h_{m}")
        old = recs[m]
        dens = old.density.without_constant() + Density.const(eps0 + const)
        recs[m] = HamiltonianRecord(m, BR, dens, "from-u-linear-term-of-next")
    return {m: r for m, r in recs.items() if m <= max(mmax, 1)}


# -- checks ---------------------------------------------------------------------------


def commute_check(a: HamiltonianRecord, b: HamiltonianRecord, kmax: int) -> dict[int, bool]:
    out = {}
    for d in range(kmax + 1):
        out[d] = a.p0(d).commutator(b.p0(d)).is_zero()
    return out


def self_adjoint_defect(rec: HamiltonianRecord, d: int, p: int = 0) -> ExactMatrix:
    if d + p < 0:
        return ExactMatrix.zeros(0, 0)
    return fock.adjoint_defect(rec.block(p, d), rec.block(-p, d + p), d, p)


def classical_limit_difference(rec: HamiltonianRecord) -> Density:
    """hbar -> 0 of the density minus the Lenard-Magri density (a total derivative if all is well)."""
    return rec.density.evaluate(h=0) - lenard_magri(rec.m)


def genus_component(mat: ExactMatrix, g: int) -> ExactMatrix:
    return mat.coeff("eps2", g)
