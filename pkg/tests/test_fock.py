from fractions import Fraction as F

import pytest

from operators import cut_and_join
from qkdv import fock
from qkdv.density import Density
from qkdv.exact import ExactMatrix, Poly
from qkdv.hamiltonians import explicit_record
from qkdv.partitions import Partition, enumerate_partitions

HBAR = Poly.var("h", 2)
U0 = Poly.var("U0")


def test_schur_examples():
    assert fock.schur_vector((2,)) == (F(1, 2), F(1, 2))
    assert fock.schur_vector((1, 1)) == (F(-1, 2), F(1, 2))
    assert fock.schur_vector((2, 1)) == (F(-1, 3), 0, F(1, 3))


def test_schur_two_routes_agree():
    for k in range(9):
        for lam in enumerate_partitions(k):
            jt = fock.schur_jacobi_trudi(lam)
            ch = fock.schur_characters(lam)
            assert jt == ch


def test_schur_conjugation_property():
    for k in range(7):
        parts = enumerate_partitions(k)
        for lam in parts:
            a = fock.schur_vector(lam.conjugate())
            b = fock.schur_vector(lam)
            assert list(a) == [(-1) ** (k + len(mu)) * x for mu, x in zip(parts, b)]


def test_inner_examples():
    q2 = [Poly.const(1), Poly()]
    assert fock.inner(q2, q2, 2) == Poly.monomial(2, h=2)
    assert fock.inner([1], [1], 0) == Poly.const(1)
    with pytest.raises(ValueError):
        fock.inner([1], [1, 0], 2)


def test_schur_orthonormal():
    for k in range(7):
        parts = enumerate_partitions(k)
        vecs = [fock.schur_q_vector(lam) for lam in parts]
        for i, a in enumerate(vecs):
            for j, b in enumerate(vecs):
                assert fock.inner(a, b, k) == Poly.const(1 if i == j else 0)


def test_quantize_u_is_u0():
    for d in range(6):
        assert fock.quantize_block(Density.u(), 0, d) == ExactMatrix.identity(fock.dim(d), U0)


def test_quantize_h0():
    dens = Density.u() * Density.u() * F(1, 2) + Density.const(Poly.monomial(F(-1, 24), h=2))
    for d in range(7):
        want = ExactMatrix.identity(fock.dim(d), HBAR * d - HBAR * F(1, 24) + U0 * U0 * F(1, 2))
        assert fock.quantize_block(dens, 0, d) == want


def test_cubic_density_is_cut_and_join():
    dens = Density.u() * Density.u() * Density.u() * F(1, 6)
    for d in range(6):
        block = fock.quantize_block(dens, 0, d).evaluate(U0=0)
        parts = fock.basis(d)
        want = [[Poly() for _ in parts] for _ in parts]
        for j, mu in enumerate(parts):
            for nu, c in cut_and_join(mu).items():
                want[parts.index(nu)][j] = want[parts.index(nu)][j] + c
        assert block == ExactMatrix(want)


def test_grading_and_empty_blocks():
    dens = Density.u() * Density.u(2)
    for p in (-2, -1, 1, 2):
        for d in range(5):
            m = fock.quantize_block(dens, p, d)
            if d + p < 0:
                assert m.shape == (0, fock.dim(d)) or m.shape[0] == 0
            else:
                assert m.shape == (fock.dim(d + p), fock.dim(d))


def test_odd_parity_density_rejected():
    with pytest.raises(fock.FockError):
        fock.quantize_block(Density.u() * Density.u(1), 1, 2)


def test_adjoint_defect_quadratic():
    dens = Density.u() * Density.u() * F(1, 2)
    for d in range(9):
        m = fock.quantize_block(dens, 0, d)
        assert fock.adjoint_defect(m, m, d, 0).is_zero()


def test_adjoint_defect_h1():
    rec = explicit_record(1)
    for d in range(7):
        assert fock.adjoint_defect(rec.p0(d), rec.p0(d), d, 0).is_zero()
        for p in (1, 2):
            assert fock.adjoint_defect(rec.block(p, d), rec.block(-p, d + p), d, p).is_zero()


def test_adjoint_defect_single_mode():
    # q_1 from weight d to d+1 against hbar d/dq_1 from d+1 to d
    for d in range(6):
        src, tgt = fock.basis(d), fock.basis(d + 1)
        up = [[Poly() for _ in src] for _ in tgt]
        down = [[Poly() for _ in tgt] for _ in src]
        for j, mu in enumerate(src):
            up[tgt.index(Partition(sorted(mu + (1,), reverse=True)))][j] = Poly.const(1)
        for j, mu in enumerate(tgt):
            n = mu.count(1)
            if n:
                rest = list(mu)
                rest.remove(1)
                down[src.index(Partition(rest))][j] = HBAR * n
        defect = fock.adjoint_defect(ExactMatrix(up, len(tgt), len(src)), ExactMatrix(down, len(src), len(tgt)), d, 1)
        assert defect.is_zero()


def test_operator_block_json():
    blk = fock.quantize(Density.u() * Density.u(), 1, 3)[2]
    assert fock.OperatorBlock.from_json(blk.to_json()) == blk
    assert blk.to_json()["basis"] == "monomial"


def test_t_basis_round_trip():
    rec = explicit_record(1)
    for d in range(5):
        t = fock.to_t_basis(rec.p0(d), d, d)
        assert fock.schur_to_t(fock.t_to_schur(t, d), d) == t
