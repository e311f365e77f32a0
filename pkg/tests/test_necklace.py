from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from necklace_invariants.necklace import (
    WordSyntaxError,
    bidegree,
    canonicalize,
    compare_deglex,
    enumerate_necklaces,
    find_ch_decomposition,
    is_chn,
    necklaces_of_degree,
    parse_necklace,
    parse_word,
    render,
    rotations,
    swap_letters,
)

words = st.text(alphabet="AB", max_size=12)


def brute_classes(r, s):
    """Rotation classes by exhaustive closure over all words of content (r, s)."""
    seen = set()
    for w in product("AB", repeat=r + s):
        w = "".join(w)
        if w.count("A") == r:
            seen.add(min(w[i:] + w[:i] for i in range(len(w))))
    return seen


@pytest.mark.parametrize("word, expected", [("BAAAB", "AAABB"), ("BABAA", "AABAB"), ("", "")])
def test_canonicalize(word, expected):
    assert canonicalize(word) == expected


def test_deglex_order():
    assert compare_deglex("AAB", "AAA") < 0
    assert compare_deglex("BB", "AAAAB") < 0
    assert compare_deglex("AABB", "AABB") == 0


@pytest.mark.parametrize("word, n, expected", [("AAAAB", 4, True), ("AAABB", 4, False), ("ABABABAB", 4, True)])
def test_is_chn(word, n, expected):
    assert is_chn(word, n) is expected


def test_ch_decomposition():
    assert find_ch_decomposition("AAAAA", 4) == ("A", "A")
    assert find_ch_decomposition("ABABABAB", 4) == ("AB", "")
    assert find_ch_decomposition("AAABB", 4) is None


def test_enumerate_examples():
    assert enumerate_necklaces((2, 1)) == ["AAB"]
    assert sorted(enumerate_necklaces((2, 2))) == ["AABB", "ABAB"]
    assert sorted(enumerate_necklaces((3, 2))) == ["AAABB", "AABAB"]


@pytest.mark.parametrize("r, s", [(r, s) for r in range(7) for s in range(7) if 0 < r + s <= 10])
def test_enumeration_matches_brute_force(r, s):
    assert set(enumerate_necklaces((r, s))) == brute_classes(r, s)


def test_swap_letters():
    assert swap_letters("AAAAB") == "ABBBB"
    assert swap_letters("ABAB") == "ABAB"
    assert swap_letters("AAABB") == "AABBB"


def test_parse_word():
    assert parse_word("A^4B")[0] == "AAAAB"
    assert parse_word("AABAB")[0] == "AABAB"
    with pytest.raises(WordSyntaxError):
        parse_word("A^0B")
    with pytest.raises(WordSyntaxError):
        parse_word("A^4C")


@given(words)
def test_rotation_invariance(w):
    assert all(canonicalize(r) == canonicalize(w) for r in rotations(w))


@given(words)
def test_canonical_is_idempotent_and_minimal(w):
    c = canonicalize(w)
    assert canonicalize(c) == c
    assert bidegree(c) == bidegree(w)
    assert all(c <= r for r in rotations(w))


@given(words)
def test_swap_is_involution(w):
    v = canonicalize(w)
    assert swap_letters(swap_letters(v)) == v
    assert bidegree(swap_letters(v)) == bidegree(v)[::-1]


@given(words)
def test_render_parse_roundtrip(w):
    v = canonicalize(w)
    assert parse_necklace(render(v)) == v


@given(words, st.integers(2, 4))
def test_ch_decomposition_reassembles(w, n):
    v = canonicalize(w)
    dec = find_ch_decomposition(v, n)
    assert (dec is not None) == is_chn(v, n)
    if dec:
        u, tail = dec
        assert canonicalize(u * n + tail) == v


def test_degree_counts():
    # number of binary necklaces of length d (OEIS A000031)
    assert [len(necklaces_of_degree(d)) for d in range(1, 9)] == [2, 3, 4, 6, 8, 14, 20, 36]
