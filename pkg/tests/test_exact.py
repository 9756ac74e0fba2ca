from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkdv.exact import (
    ExactMatrix,
    ExactSeries,
    InconsistentSystem,
    Poly,
    RankDeficient,
    charpoly,
    exp_series,
    solve_linear,
    solve_rational,
)

NAMES = ("h", "eps2", "U0", "sigma")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
monos = st.tuples(*[st.integers(0, 3) for _ in NAMES])
polys = st.lists(st.tuples(monos, coeffs), max_size=4).map(
    lambda items: sum((Poly.monomial(c, **dict(zip(NAMES, e))) for e, c in items), Poly())
)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly()
    assert a * Poly.const(1) == a


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_divide_exact_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert (a * b).divide_exact(b) == a


@settings(max_examples=40, deadline=None)
@given(polys)
def test_json_round_trip(a):
    assert Poly.from_json(a.to_json()) == a


def test_monomial_product():
    s = Poly.var("sigma")
    assert s * s == Poly.var("sigma", 2)


def test_substitution_matches_scaling():
    # eps^2 -> -sigma * hbar^(1/2) in eps^2 hbar, with h = hbar^(1/2)
    p = Poly.monomial(1, eps2=1, h=2)
    got = p.subs("eps2", Poly.monomial(-1, sigma=1, h=1))
    assert got == Poly.monomial(-1, sigma=1, h=3)


def test_evaluate_constant_term():
    p = Poly.const(1) - Poly.monomial(F(1, 24), z=2)
    assert p.evaluate(z=0) == Poly.const(1)


def test_unknown_variable():
    with pytest.raises(ValueError, match="unknown variable"):
        Poly.var("w")
    with pytest.raises(ValueError, match="unknown variable"):
        Poly.var("sigma").subs("w", 1)


def test_inexact_division_raises():
    x = Poly.var("sigma")
    with pytest.raises(ArithmeticError):
        (x * x + 1).divide_exact(x + 1)
    big = Poly.var("sigma", 50) - 1
    q = big.divide_exact(x - 1)
    assert q * (x - 1) == big


def test_negative_powers_only_for_monomials():
    assert Poly.var("h") ** -2 == Poly.monomial(1, h=-2)
    with pytest.raises(ValueError):
        (Poly.var("h") + 1) ** -1


def test_reciprocal_of_s_series():
    # S(z) = sinh(z/2)/(z/2); the reciprocal gives the beta generating series
    order = 8
    s = ExactSeries("z", [F(1) if j == 0 else F(0) for j in range(order)], order)
    half = exp_series(Poly.monomial(F(1, 2), z=1), "z", order + 1)
    mhalf = exp_series(Poly.monomial(F(-1, 2), z=1), "z", order + 1)
    sinh = [(half.coeffs[j] - mhalf.coeffs[j]) * F(1, 2) for j in range(order + 1)]
    s = ExactSeries("z", [c * 2 for c in sinh[1:]], order)
    inv = s.reciprocal()
    want = [1, 0, F(-1, 24), 0, F(7, 5760), 0, F(-31, 967680), 0]
    assert [c.constant_term() for c in inv.coeffs] == want


def test_series_products():
    a = ExactSeries("z", [1, 1], 4)
    b = ExactSeries("z", [1, -1], 4)
    assert a * b == ExactSeries("z", [1, 0, -1], 4)
    one = ExactSeries.one("z", 5)
    assert one.reciprocal() == one


def test_series_not_invertible():
    with pytest.raises(ArithmeticError, match="series not invertible"):
        ExactSeries("z", [0, 1], 4).reciprocal()


def test_charpoly_small():
    m = ExactMatrix([[0, 1], [1, 0]])
    rho = Poly.var("rho")
    assert charpoly(m) == rho * rho - 1
    c = Poly.var("sigma") + F(3, 7)
    assert charpoly(ExactMatrix([[c]])) == rho - c


def test_charpoly_non_square():
    with pytest.raises(ValueError):
        charpoly(ExactMatrix([[1, 2]]))


def test_charpoly_matches_cayley_hamilton():
    s = Poly.var("sigma")
    m = ExactMatrix([[s, 1, 0], [2, F(1, 3), s * s], [0, -1, 5]])
    cp = charpoly(m)
    acc = ExactMatrix.zeros(3, 3)
    power = ExactMatrix.identity(3)
    for j in range(4):
        acc = acc + power.scale(cp.coeff("rho", j))
        power = power.matmul(m)
    assert acc.is_zero()


def test_solve_identity_and_scalar():
    b = [F(3), F(-2, 5), F(7)]
    sol = solve_linear(ExactMatrix.identity(3), b)
    assert [x.as_poly() for x in sol] == [Poly.const(v) for v in b]
    sol = solve_linear(ExactMatrix([[2]]), [Poly.var("sigma")])
    assert sol[0].as_poly() == Poly.monomial(F(1, 2), sigma=1)


def test_solve_polynomial_matrix():
    s = Poly.var("sigma")
    a = ExactMatrix([[s, 1], [1, s]])
    sol = solve_linear(a, [s + 1, s + 1])
    assert [x.as_poly() for x in sol] == [Poly.const(1), Poly.const(1)]


def test_inconsistent_and_rank_deficient():
    with pytest.raises(InconsistentSystem) as info:
        solve_rational([[F(1), F(1)], [F(2), F(2)]], [F(1), F(3)], 2)
    assert info.value.row == 1
    with pytest.raises(RankDeficient):
        solve_rational([[F(1), F(1)]], [F(1)], 2)
