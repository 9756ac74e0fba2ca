from fractions import Fraction as F

import pytest

from operators import HBAR, cut_and_join, euler_power, matrix_of
from qkdv import fock
from qkdv.density import Density, lenard_magri
from qkdv.exact import ExactMatrix, Poly
from qkdv.hamiltonians import (
    HamiltonianRecord,
    br_chain,
    br_step,
    classical_limit_difference,
    commute_check,
    density_reconstruct,
    dispersionless_block,
    dispersionless_record,
    explicit_density,
    explicit_record,
    genus_component,
    self_adjoint_defect,
)

U0 = Poly.var("U0")
EPS2 = Poly.var("eps2")


@pytest.fixture(scope="module")
def chain():
    return br_chain(3)


def printed_h1(d):
    """Delta + hbar U0 sum k q_k d_k - (eps^2 hbar/12) sum k^3 q_k d_k - eps^2 hbar/2880 - hbar U0/24 + U0^3/6."""
    delta = matrix_of(cut_and_join, d)
    diag = []
    for mu in fock.basis(d):
        diag.append(
            HBAR * U0 * euler_power(mu, 1)
            - EPS2 * HBAR * F(euler_power(mu, 3), 12)
            - EPS2 * HBAR * F(1, 2880)
            - HBAR * U0 * F(1, 24)
            + U0 * U0 * U0 * F(1, 6)
        )
    return delta + ExactMatrix.diagonal(diag)


def test_explicit_h0_and_h1_match_printed_operators():
    for d in range(7):
        want0 = ExactMatrix.identity(fock.dim(d), HBAR * d - HBAR * F(1, 24) + U0 * U0 * F(1, 2))
        assert explicit_record(0).p0(d) == want0
        assert explicit_record(1).p0(d) == printed_h1(d)
        assert explicit_record(-1).p0(d) == ExactMatrix.identity(fock.dim(d), U0)


def test_explicit_h1_derivative():
    # the printed h_1 carries eps^2 u u_xx / 24, whose u-derivative leaves the total derivative eps^2 u_xx / 24
    diff = explicit_density(1).diff_u(0) - explicit_density(0)
    assert diff == Density.u(2) * (EPS2 * F(1, 24))
    assert diff.is_total_derivative()
    assert explicit_density(0).diff_u(0) == explicit_density(-1)
    with pytest.raises(ValueError):
        explicit_density(2)


def test_eliashberg_low_coefficients():
    for d in range(7):
        assert dispersionless_block(0, d) == explicit_record(0).p0(d)
        assert dispersionless_block(1, d) == explicit_record(1).p0(d).evaluate(eps2=0)
        assert dispersionless_block(-1, d) == ExactMatrix.identity(fock.dim(d), U0)


def test_dispersionless_commute():
    for m in range(-1, 4):
        for n in range(m + 1, 5):
            assert all(commute_check(dispersionless_record(m, 6), dispersionless_record(n, 6), 6).values())


def test_recursion_from_h0_matches_h1_up_to_total_derivative():
    h1 = explicit_record(1)
    blocks = br_step(explicit_record(0), 5, 3, h1)
    dens = density_reconstruct(blocks, 1)
    assert (dens - explicit_density(1)).without_constant().is_total_derivative()
    rec = HamiltonianRecord(1, "test", dens, "none")
    for d in range(6):
        assert rec.p0(d) + ExactMatrix.identity(fock.dim(d), EPS2 * HBAR * F(-1, 2880)) == h1.p0(d)


def test_reconstruct_round_trip():
    for m in (0, 1):
        dens = explicit_density(m)
        rec = explicit_record(m)
        blocks = {(p, d): rec.block(p, d) for p in (-3, -2, -1, 1, 2, 3) for d in range(6) if d + p >= 0}
        assert density_reconstruct(blocks, m) == dens.without_constant()


def test_constructed_records(chain):
    assert set(chain) == {-1, 0, 1, 2, 3}
    for m in (2, 3):
        rec = chain[m]
        assert rec.provenance == "br-recursion"
        assert classical_limit_difference(rec).is_total_derivative()
        assert (rec.density.diff_u(0) - chain[m - 1].density).is_total_derivative()


def test_classical_limit_p0_blocks(chain):
    for m in (2, 3):
        cl = HamiltonianRecord(m, "classical", lenard_magri(m), "none")
        for d in range(6):
            assert chain[m].p0(d).evaluate(h=0) == cl.p0(d).evaluate(h=0)


def test_commutativity_full(chain):
    for m in range(-1, 4):
        for n in range(m + 1, 4):
            assert all(commute_check(chain[m], chain[n], 6).values())


def test_dispersionless_part(chain):
    for m in range(-1, 4):
        for d in range(7):
            assert chain[m].p0(d).evaluate(eps2=0) == dispersionless_block(m, d)


def test_u0_derivative(chain):
    for m in range(-1, 3):
        for d in range(6):
            lhs = chain[m + 1].p0(d).map(lambda x: x.diff("U0"))
            assert lhs == chain[m].p0(d)


def test_genus_vanishing(chain):
    for m in range(0, 4):
        for d in range(7):
            mat = chain[m].p0(d)
            assert not genus_component(mat, m).is_zero()
            for g in range(m + 1, m + 4):
                assert genus_component(mat, g).is_zero()


def test_self_adjoint(chain):
    for m in range(-1, 4):
        for d in range(6):
            for p in (0, 1, 2):
                assert self_adjoint_defect(chain[m], d, p).is_zero()


def test_record_json_round_trip(chain):
    rec = chain[2]
    back = HamiltonianRecord.from_json(rec.to_json())
    assert back.density == rec.density
    assert back.constant_convention == rec.constant_convention
    assert back.p0(3) == rec.p0(3)
