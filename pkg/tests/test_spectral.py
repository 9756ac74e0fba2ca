from fractions import Fraction as F

import pytest

from paper_tables import GENUS_TABLE, R2, R3, R4
from qkdv import fock
from qkdv.exact import ExactMatrix, Poly
from qkdv.hamiltonians import br_chain
from qkdv.partitions import Partition, enumerate_partitions, q_function
from qkdv.spectral import (
    SpectralError,
    conjecture_rhs,
    conjugation_defect,
    deformed_schur,
    dispersionless_eigen,
    eigen_residual,
    inner_series,
    mstar_search,
    scale,
    sigma_infinity_diag,
    spectral_curve,
)

V0 = Poly.var("V0")
SIGMA = Poly.var("sigma")
RHO = Poly.var("rho")


@pytest.fixture(scope="module")
def chain():
    return br_chain(3)


@pytest.fixture(scope="module")
def families(chain):
    cache = {}

    def get(k, order):
        if (k, order) not in cache:
            ops = {m: scale(chain[m], k) for m in range(0, 4)}
            cache[k, order] = {d.lam: d for d in deformed_schur(k, order, ops)}
        return cache[k, order]

    return get


def test_scaled_low_operators(chain):
    for k in range(6):
        n = fock.dim(k)
        assert scale(chain[-1], k).matrix == ExactMatrix.identity(n, V0)
        diag = [V0 * V0 * F(1, 2) + k - F(1, 24) for _ in range(n)]
        assert scale(chain[0], k).matrix == ExactMatrix.diagonal(diag)


def test_scaled_entries_free_of_h(chain):
    for m in range(-1, 4):
        for k in range(6):
            mat = scale(chain[m], k).matrix
            assert all(x.free_of("h") for row in mat.entries for x in row)


def test_k1_weight2_mixing(chain):
    mat = scale(chain[1], 2, with_v0=False).matrix
    for i, j in ((0, 1), (1, 0)):
        x = mat[i, j]
        assert x and x == x.coeff("sigma", 1) * SIGMA
    assert max(x.degree("sigma") for row in mat.entries for x in row) <= 1


def test_dispersionless_eigen_examples():
    for k in range(5):
        for lam in enumerate_partitions(k):
            assert dispersionless_eigen(-1, lam) == V0
    assert dispersionless_eigen(0, (1,)) == V0 * V0 * F(1, 2) + 1 - F(1, 24)
    assert dispersionless_eigen(1, ()) == V0 ** 3 * F(1, 6) - V0 * F(1, 24)


def test_mstar():
    assert mstar_search(0) == 0
    assert mstar_search(6) == 2
    for k in range(2, 6):
        assert mstar_search(k) == 1
    # weight 1 has a single partition, so it is separated already at m = 0
    assert mstar_search(1) == 0
    lam, mu = Partition((4, 1, 1)), Partition((3, 3))
    assert q_function(3, lam) == q_function(3, mu)
    assert q_function(4, lam) != q_function(4, mu)


def test_mstar_bound_error():
    with pytest.raises(SpectralError):
        mstar_search(6, bound=1)


def _check_table(fam, table, count):
    for lam, row in table.items():
        ds = fam[Partition(lam)]
        for nu, printed in row.items():
            got = [c.constant_term() for c in ds.coefficient(nu).coeffs[1:count + 1]]
            assert got == printed, (lam, nu)


def test_printed_r2(families):
    fam = families(2, 8)
    _check_table(fam, R2, 7)
    # coefficient of s_lam in r_lam is exactly 1
    for lam, ds in fam.items():
        assert [c.constant_term() for c in ds.coefficient(lam).coeffs] == [1] + [0] * 7


def test_printed_r3_r4(families):
    _check_table(families(3, 5), R3, 4)
    _check_table(families(4, 4), R4, 3)


def test_orthogonality_and_conjugation(families):
    for k in range(6):
        fam = families(k, 6)
        lams = list(fam)
        for i, a in enumerate(lams):
            for b in lams[i + 1:]:
                assert not any(inner_series(fam[a], fam[b]).coeffs)
        assert conjugation_defect(fam) == []


def test_simultaneous_eigenvectors(chain, families):
    for k in range(5):
        fam = families(k, 6)
        for m in range(0, 4):
            op = scale(chain[m], k)
            for ds in fam.values():
                assert not any(any(s.coeffs) for s in eigen_residual(op, ds, 6))
                assert ds.eigen[m].coeffs[0] == dispersionless_eigen(m, ds.lam)


def test_eigen_v0_derivative(families):
    # dF_{m+1}/dV0 = F_m, inherited from dH_{m+1}/dU0 = H_m
    for k in range(5):
        for ds in families(k, 6).values():
            for m in range(0, 3):
                lhs = [c.diff("V0") for c in ds.eigen[m + 1].coeffs]
                assert lhs == list(ds.eigen[m].coeffs)


def test_spectral_curves_low_weights(chain):
    h1 = chain[1]
    assert spectral_curve(h1, 1).poly == RHO - SIGMA * F(241, 2880)
    assert spectral_curve(h1, 0).poly == RHO - SIGMA * F(1, 2880)


def test_spectral_curve_weight2(chain):
    curve = spectral_curve(chain[1], 2)
    p = curve.poly
    assert p.degree("rho") == 2
    # at sigma = 0 the roots are the dispersionless eigenvalues at U0 = 0
    at0 = p.evaluate(sigma=0)
    want = Poly.const(1)
    for lam in fock.basis(2):
        want = want * (RHO - dispersionless_eigen(1, lam).evaluate(V0=0))
    assert at0 == want
    a, b, c = p.coeff("rho", 2), p.coeff("rho", 1), p.coeff("rho", 0)
    disc = b * b - a * c * 4
    # the discriminant is a positive multiple of 16 + sigma^2
    ratio = disc.coeff("sigma", 0).as_constant() / 16
    assert ratio > 0
    assert disc == (SIGMA * SIGMA + 16) * ratio


def test_curve_table_and_json(chain):
    curve = spectral_curve(chain[1], 2)
    table = curve.coefficient_table()
    assert (0, 2, 1) in table
    assert curve.to_json()["table"] == [[s, r, str(c)] for s, r, c in table]


def test_genus_rhs():
    assert [conjecture_rhs(k) for k in range(len(GENUS_TABLE))] == GENUS_TABLE
    assert conjecture_rhs(6) == 5 * 11 + 1 - 35


def test_sigma_infinity(chain):
    assert sigma_infinity_diag(chain[0], 3) == "sigma-independent"
    for k in range(1, 7):
        rep = sigma_infinity_diag(chain[1], k)
        assert rep.diagonal
        for lam, v in rep.entries.items():
            assert v == F(sum(x ** 3 for x in lam), 12) + F(1, 2880)
