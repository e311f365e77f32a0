import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace_invariants.hilbert import relation_space_dims
from necklace_invariants.miner import (
    BreakingPair,
    MineConfig,
    Miner,
    RelationIdeal,
    breaking_pairs,
    dump_relations,
    is_breaking_pair,
    load_relations,
    mine,
    propagate,
)
from necklace_invariants.oracle import SamplerConfig, numeric_poisson, sample_generic, verify_many
from necklace_invariants.polynomial import Poly, parse_poly
from necklace_invariants.reducer import Reducer


@pytest.fixture(scope="module")
def miner5():
    m = Miner(MineConfig(n=4, max_degree=5))
    for d in range(2, 5):
        m.process_degree(d)
    m.degree = 5
    return m


def test_breaking_pair_examples():
    assert is_breaking_pair("BB", "AAAAB", (3, 2), 4)
    assert not is_breaking_pair("AAB", "ABAB", (3, 2), 4)
    assert not is_breaking_pair("AA", "AA", (1, 1), 4)
    pairs = breaking_pairs((3, 2), 4)
    assert BreakingPair("BB", "AAAAB", (3, 2)) in pairs


def test_pair_equation(miner5):
    coeffs, rhs = miner5.pair_equation(BreakingPair("BB", "AAAAB", (3, 2)))
    assert coeffs == {"AAABB": -4, "AABAB": -4}
    assert rhs == parse_poly("-2/3*a5*a6 - 4*a4*a7 - 2*a3*a8")


def test_generator_equation(miner5):
    assert miner5.generator_equation(16, (3, 2)) == ({"AAABB": -1, "AABAB": 1}, Poly.var(16))


def test_special_equation_m2_consistent():
    m = Miner(MineConfig(n=4, max_degree=4))
    for d in range(2, 5):
        m.process_degree(d)
    coeffs, rhs = m.special_equation(2, (2, 2))
    assert not coeffs and not rhs


def test_degree_five_table():
    res = mine(4, 5)
    t = res.table
    assert t["AAAAA"] == parse_poly("5/6*a3*a6")
    assert t["AAABB"] == parse_poly("1/12*a5*a6 + 1/2*a4*a7 + 1/4*a3*a8 - 1/2*a16")
    assert t["AABAB"] == parse_poly("1/12*a5*a6 + 1/2*a4*a7 + 1/4*a3*a8 + 1/2*a16")
    assert not res.ideal.relations


def test_relation_ideal_dims():
    ideal = RelationIdeal(4)
    assert ideal.graded_dim(12) == 0
    rho = parse_poly("a15^3 - a21^2")  # bidegree (6,6), used only as a container entry
    assert ideal.add(rho, (6, 6)) is not None
    assert ideal.graded_dim(12) == 1
    assert ideal.add(rho.scale(3), (6, 6)) is None
    # degree 14 is spanned by a3*rho, a4*rho, a5*rho
    assert ideal.graded_dim(14) == 3


def test_n2_free(mined2):
    assert not mined2.ideal.relations and mined2.complete


def test_n3_single_relation(mined3):
    assert mined3.complete
    ((b, rho),) = mined3.ideal.relations
    assert b == (6, 6)
    assert rho.terms[mined3.ideal.ring.leading_monomial(rho)] == 54


def test_n4_dims_match_deficits(mined4):
    dims = relation_space_dims(4, 13)
    assert [mined4.ideal.graded_dim(d) for d in range(14)] == dims
    assert dims[11] == 0 and dims[12] == 5 and dims[13] == 8


def test_special_equation_needed_at_degree_12():
    with_special = mine(4, 12)
    without = mine(4, 12, special=False)
    assert with_special.complete
    assert without.unfilled == {12: 1}


def test_mirror_closure(mined4):
    ring = mined4.ideal.ring
    for b, rho in mined4.ideal.relations:
        mirror = ring.swap(rho)
        assert mined4.ideal.contains(mirror, (b[1], b[0]))


def test_propagation_stays_in_ideal(mined4):
    m = Miner(MineConfig(n=4, max_degree=13))
    m.ideal = mined4.ideal
    m.reducer = Reducer(4, mined4.table)
    m.table = mined4.table
    m.degree = 12
    for cand in propagate(m, 5, (7, 5)):
        assert mined4.ideal.contains(cand, (6, 6))
    assert not m.adjoint(5, Poly())


def test_relations_vanish_and_are_poisson(mined4):
    rels = [p for _, p in mined4.ideal.relations]
    assert not verify_many(rels, 4, trials=3, cfg=SamplerConfig(21))
    pair = sample_generic(4, SamplerConfig(22), 0)
    for rho in rels:
        assert numeric_poisson(Poly.var(5), rho, pair) == 0


def test_relation_file_roundtrip(mined3):
    text = dump_relations(mined3.ideal.relations, 3, 12, 0)
    fields, rels = load_relations(text)
    assert fields["n"] == "3" and rels == mined3.ideal.relations
    with pytest.raises(ValueError):
        load_relations("(6,6): a3\n")


@given(st.integers(2, 4), st.integers(2, 6), st.integers(0, 6))
@settings(max_examples=30, deadline=None)
def test_breaking_pairs_satisfy_conditions(n, r, s):
    for p in breaking_pairs((r, s), n):
        assert is_breaking_pair(p.first, p.second, (r, s), n)
