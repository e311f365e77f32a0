import pytest
from hypothesis import given
from hypothesis import strategies as st

from necklace_invariants.generators import primary_degrees_n4, secondary_degrees_n4
from necklace_invariants.hilbert import (
    C42_DENOMINATOR,
    C42_NUMERATOR,
    PRINTED_RESCALED_NUMERATOR,
    RationalSeries,
    c22_series,
    c32_series,
    c42_series,
    deficit,
    free_ring_series,
    from_terms,
    hironaka_accounting,
    one_minus,
    poly_mul,
    poly_prod,
    relation_space_dims,
    rescaled_numerator,
)


def count_monomials(degrees, D):
    """Coefficients of prod 1/(1 - t^d) by the coin-change recursion."""
    ways = [1] + [0] * D
    for d in degrees:
        for k in range(d, D + 1):
            ways[k] += ways[k - d]
    return ways


def hironaka_oracle(primary, secondary, D):
    base = count_monomials(primary, D)
    return [sum(base[k - q] for q in secondary if k >= q) for k in range(D + 1)]


def test_geometric():
    assert RationalSeries.of([1], one_minus(1)).coefficients(3) == [1, 1, 1, 1]


def test_c42_low_coefficients():
    assert c42_series().coefficients(2) == [1, 2, 6]


def test_c42_shape():
    assert C42_NUMERATOR == poly_mul(
        from_terms({0: 1, 2: -1, 4: 1}),
        from_terms({0: 1, 1: -1, 3: -1, 4: 1, 5: 2, 6: 1, 7: -1, 9: -1, 10: 1}),
    )
    assert C42_DENOMINATOR == poly_prod([one_minus(1)] * 3 + [one_minus(2)] * 4 + [one_minus(3)] * 5 + [one_minus(4)] * 5)
    assert all(c >= 0 for c in c42_series().coefficients(24))


def test_rescaled_numerator():
    num = rescaled_numerator()
    assert num == PRINTED_RESCALED_NUMERATOR
    assert num[5] == 2 and num[24] == 1 and sum(num) == 48


def test_c42_equals_hironaka_oracle():
    D = 40
    assert c42_series().coefficients(D) == hironaka_oracle(primary_degrees_n4(), secondary_degrees_n4(), D)


def test_accounting_match_and_negative_control():
    res = hironaka_accounting(primary_degrees_n4(), secondary_degrees_n4())
    assert res.match and res.verdict() == "match" and res.secondary_count == 48
    bad = hironaka_accounting(primary_degrees_n4(), secondary_degrees_n4()[:-1])
    assert not bad.match and bad.first_mismatch[0] == 24


def test_n3_accounting():
    res = hironaka_accounting([1, 1, 2, 2, 2, 3, 3, 3, 3, 4], [0, 6], c32_series(), n=3)
    assert res.match


def test_c22_is_free():
    assert c22_series().coefficients(20) == count_monomials([1, 1, 2, 2, 2], 20)
    assert relation_space_dims(2, 20) == [0] * 21


def test_relation_dims():
    # free traceless ring minus target, both expanded by independent counting
    n4 = relation_space_dims(4, 16)
    assert n4[:12] == [0] * 12
    assert n4[12:] == [5, 8, 30, 62, 159]
    n3 = relation_space_dims(3, 16)
    assert n3[:12] == [0] * 12 and n3[12:] == [1, 0, 3, 4, 7]
    assert deficit(4, 11) == 0 and deficit(4, 12) > 0
    assert deficit(4, 12, ideal_dim=5) == 0


def test_relation_dims_by_counting():
    from necklace_invariants.generators import ring_for

    D = 16
    ring = ring_for(4)
    free = count_monomials([ring.deg[i] for i in ring.traceless_indices], D)
    primary = [d for d in primary_degrees_n4() if d != 1]  # the two trace generators drop out
    target = hironaka_oracle(primary, secondary_degrees_n4(), D)
    assert relation_space_dims(4, D) == [f - t for f, t in zip(free, target)]


@given(st.lists(st.integers(1, 6), min_size=1, max_size=6))
def test_free_series_matches_counting(degrees):
    assert free_ring_series(degrees).coefficients(15) == count_monomials(degrees, 15)


def test_bad_denominator():
    with pytest.raises(ValueError):
        RationalSeries.of([1], [0, 1])
