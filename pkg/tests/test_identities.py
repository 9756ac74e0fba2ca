from fractions import Fraction as F

import pytest

from qkdv.exact import Poly
from qkdv.hamiltonians import br_chain
from qkdv.identities import (
    DegeneratePair,
    content_sum,
    corollary_sum,
    find_p2_pairs,
    find_pairs,
    lemma34_from_corollary,
    verify_corollary,
    verify_lemma34,
)
from qkdv.partitions import Partition, enumerate_partitions, p_function, q_function

P = Partition


@pytest.fixture(scope="module")
def chain():
    return br_chain(2)


def test_no_pairs_below_six():
    assert find_p2_pairs(5) == []


def test_weight_six_pairs():
    pairs = [(p.lam, p.mu, p.shared_invariant) for p in find_p2_pairs(6)]
    assert pairs == [(P((4, 1, 1)), P((3, 3)), 6), (P((3, 1, 1, 1)), P((2, 2, 2)), -6)]


def test_pairs_are_valid():
    for p in find_p2_pairs(8):
        assert p.lam != p.mu and p.lam.weight == p.mu.weight == p.k
        assert p_function(2, p.lam) == p_function(2, p.mu) == p.shared_invariant


def test_find_pairs_precondition():
    with pytest.raises(ValueError):
        find_p2_pairs(0)


def test_corollary_vanishes():
    for p in find_p2_pairs(8):
        assert verify_corollary(p) == 0


def test_corollary_non_pair_and_errors():
    # a non-degenerate pair gives some value; no vanishing is claimed, only that it is an integer
    value = corollary_sum((6,), (1, 1, 1, 1, 1, 1))
    assert isinstance(value, int)
    with pytest.raises(ValueError):
        corollary_sum((4, 1, 1), (4, 1, 1))
    with pytest.raises(ValueError):
        corollary_sum((2,), (1, 1, 1))


def test_corollary_detects_nondegenerate_pairs():
    # for pairs with different P2 the sum need not vanish; at least one weight-3 pair is nonzero
    values = [corollary_sum(a, b) for a in enumerate_partitions(3) for b in enumerate_partitions(3) if a != b]
    assert any(values)


def test_lemma_vanishes_and_matches_corollary(chain):
    for p in find_p2_pairs(8):
        v = verify_lemma34(p, 1, chain[1])
        assert v == Poly()
        assert v == lemma34_from_corollary(p)


def test_lemma_route_equivalence_off_hypothesis(chain):
    # the two routes agree even where the sum is nonzero; the hypothesis check is bypassed here
    from qkdv import fock

    h1 = chain[1]
    for k in range(2, 6):
        parts = enumerate_partitions(k)
        block = h1.p0(k).evaluate(U0=0).coeff("eps2", 1)
        for a in parts:
            for b in parts:
                if a == b:
                    continue
                v = fock.inner(fock.schur_q_vector(a), block.apply(fock.schur_q_vector(b)), k)
                pair = DegeneratePair(k, a, b, F(0))
                assert v == lemma34_from_corollary(pair)


def test_lemma_hypothesis_checked(chain):
    bad = DegeneratePair(3, P((3,)), P((2, 1)), F(0))
    with pytest.raises(ValueError):
        verify_lemma34(bad, 1, chain[1])
    with pytest.raises(ValueError):
        verify_lemma34(find_p2_pairs(6)[0], 2, chain[1])


def test_lemma_m2_for_q4_pairs(chain):
    # Q_4-degenerate pairs: every one found for k <= 8 is tested against H_2
    found = 0
    for k in range(1, 9):
        parts = enumerate_partitions(k)
        for i, a in enumerate(parts):
            for b in parts[i + 1:]:
                if q_function(4, a) == q_function(4, b):
                    pair = DegeneratePair(k, a, b, q_function(4, a))
                    assert verify_lemma34(pair, 2, chain[2]) == Poly()
                    found += 1
    assert found > 0


def test_p2_is_twice_content_sum():
    for k in range(9):
        for lam in enumerate_partitions(k):
            assert p_function(2, lam) == 2 * content_sum(lam)


def test_find_pairs_general_j():
    assert [(p.lam, p.mu) for p in find_pairs(6, 2)] == [(p.lam, p.mu) for p in find_p2_pairs(6)]
