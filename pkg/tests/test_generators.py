import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace_invariants.generators import (
    UnsupportedSize,
    generator_table,
    primary_degrees_n4,
    ring_for,
    secondary_degrees_n4,
)
from necklace_invariants.hilbert import free_traceless
from necklace_invariants.oracle import Evaluator, SamplerConfig, sample_generic
from necklace_invariants.polynomial import Poly, PolySyntaxError, parse_poly
from necklace_invariants.tracepoly import NecklaceSum


def test_generator_counts():
    assert [g.degree for g in generator_table(2)] == [1, 1, 2, 2, 2]
    assert len(generator_table(3)) == 11
    table = generator_table(4)
    assert len(table) == 32 and table[-1].name == "a32" and table[-1].degree == 10
    with pytest.raises(UnsupportedSize):
        generator_table(5)


def test_n3_aliases():
    ring = ring_for(3)
    assert ring.by_index[10].alias == "a15" and ring.by_index[10].name == "g10"
    assert ring.by_index[11].alias == "a21" and ring.by_index[11].bidegree == (3, 3)


def test_expansions():
    ring = ring_for(4)
    assert ring.by_index[15].bidegree == (2, 2)
    assert ring.expansions[16] == NecklaceSum({"AAABB": -1, "AABAB": 1})
    # 1/2 (AB - BA)^2 traced: ABAB - A^2B^2
    assert ring.expansions[15] == NecklaceSum({"ABAB": 1, "AABB": -1})
    assert ring.expansions[7] == NecklaceSum({"AAB": 1})


@pytest.mark.parametrize("n", [2, 3, 4])
def test_expansions_match_products_numerically(n):
    ring = ring_for(n)
    for t in range(3):
        ev = Evaluator(sample_generic(n, SamplerConfig(11), t))
        vals = ev.generators()
        for i in ring.traceless_indices:
            assert ev.necklace_sum(ring.expansions[i]) == vals[i]


def test_support():
    support = ring_for(4).support()
    assert "ABAB" in support and "AAB" in support
    assert "AAAAB" not in support


def test_graded_basis_examples():
    ring = ring_for(4)
    fmt = lambda b: sorted(ring.format(Poly.monomial(m)) for m in ring.graded_basis(b))
    assert fmt((2, 1)) == ["a7"]
    assert fmt((1, 1)) == ["a4"]
    assert fmt((2, 2)) == ["a12", "a15", "a3*a5", "a4^2"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_graded_basis_counts_match_free_series(n):
    ring = ring_for(n)
    series = free_traceless(n).coefficients(12)
    for d in range(13):
        count = sum(len(ring.graded_basis((r, d - r))) for r in range(d + 1))
        assert count == series[d]


def test_swap_images():
    ring = ring_for(4)
    images = ring.swap_images()
    assert images[16] == Poly.var(17)
    assert images[21] == -Poly.var(21)
    assert images[4] == Poly.var(4)


@pytest.mark.parametrize("n", [3, 4])
def test_swap_images_numerically(n):
    ring = ring_for(n)
    for t in range(2):
        pair = sample_generic(n, SamplerConfig(5), t)
        ev, sw = Evaluator(pair), Evaluator(type(pair)(pair.Y, pair.X, "swapped", pair.seed))
        for i in ring.traceless_indices:
            assert sw.generators()[i] == ev.genpoly(ring.swap_images()[i])


def random_poly(rng, ring, terms=4):
    p = Poly()
    idx = list(ring.traceless_indices)
    for _ in range(terms):
        m = Poly.const(rng.randint(-5, 5))
        for _ in range(rng.randint(0, 3)):
            m = m * Poly.var(rng.choice(idx))
        p = p + m
    return p


@given(st.integers(0, 10**6))
@settings(max_examples=50)
def test_swap_is_involution(seed):
    ring = ring_for(4)
    p = random_poly(random.Random(seed), ring)
    assert ring.swap(ring.swap(p)) == p


@given(st.integers(0, 10**6))
@settings(max_examples=50)
def test_format_parse_roundtrip(seed):
    ring = ring_for(4)
    p = random_poly(random.Random(seed), ring) * mpq(3, 7)
    assert parse_poly(ring.format(p)) == p


def test_parse_errors():
    with pytest.raises(PolySyntaxError):
        parse_poly("a3 +* a4")


def test_canonical_positive_primitive():
    ring = ring_for(4)
    p = ring.canonical(parse_poly("-2/3*a3*a5 + 4/3*a4^2"))
    assert p == parse_poly("2*a4^2 - a3*a5") or p == parse_poly("a3*a5 - 2*a4^2")
    assert p.terms[ring.leading_monomial(p)] > 0


def test_hironaka_degrees():
    assert sorted(primary_degrees_n4()) == [1, 1, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 6, 6]
    assert len(secondary_degrees_n4()) == 48
