"""Two-letter words and necklaces.

A necklace is stored as its canonical representative: the rotation that is
maximal under the letter order ``A > B``.  Internally words always use the
letters ``A`` and ``B``; the generic alphabet ``X``/``Y`` only exists at the
text boundary (``parse_word`` / ``render``).

Because ``'A' < 'B'`` natively, the maximal rotation under ``A > B`` is the
*minimal* rotation under Python's string order.
"""

import re
from functools import lru_cache
from itertools import combinations

L1 = "A"
L2 = "B"
LETTERS = (L1, L2)

TRACELESS_ALPHABET = "AB"
GENERIC_ALPHABET = "XY"

_SWAP = str.maketrans("AB", "BA")
_TO_INTERNAL = {"A": "A", "B": "B", "X": "A", "Y": "B"}


class WordSyntaxError(ValueError):
    pass


@lru_cache(maxsize=1 << 17)
def canonicalize(word):
    """Return the canonical representative of the necklace of ``word``."""
    if len(word) < 2:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def rotations(word):
    return [word[i:] + word[:i] for i in range(len(word))] or [word]


def bidegree(word):
    a = word.count(L1)
    return (a, len(word) - a)


def deglex_key(necklace):
    """Sort key realizing the degree-lexicographic order on necklaces.

    Shorter necklaces are smaller; equal lengths compare lexicographically
    with ``A > B``.
    """
    return (len(necklace), necklace.translate(_SWAP))


def compare_deglex(n1, n2):
    """Three-way comparison: -1 if n1 < n2, 0 if equal, 1 if n1 > n2."""
    k1, k2 = deglex_key(n1), deglex_key(n2)
    return (k1 > k2) - (k1 < k2)


@lru_cache(maxsize=1 << 16)
def _chn_decompositions(necklace, n):
    found = set()
    length = len(necklace)
    for rot in rotations(necklace):
        for k in range(1, length // n + 1):
            u = rot[:k]
            if rot[: n * k] == u * n:
                found.add((u, rot[n * k:]))
    return tuple(sorted(found))


def all_ch_decompositions(necklace, n):
    """Every ``(u, tail)`` with ``u`` nonempty and ``u^n + tail`` a rotation."""
    return list(_chn_decompositions(canonicalize(necklace), n))


def is_chn(necklace, n):
    """True when some rotation contains n consecutive copies of a nonempty word."""
    return bool(_chn_decompositions(canonicalize(necklace), n))


def _max_key(word):
    # lexicographic order with A > B
    return word.translate(_SWAP)


def find_ch_decomposition(necklace, n):
    """Pick one Cayley-Hamilton decomposition ``(u, tail)`` or return None.

    Shortest ``u`` wins; ties go to the lexicographically greatest ``u`` and
    then to the greatest tail (the greatest starting rotation).
    """
    candidates = _chn_decompositions(canonicalize(necklace), n)
    if not candidates:
        return None
    shortest = min(len(u) for u, _ in candidates)
    pool = [c for c in candidates if len(c[0]) == shortest]
    return max(pool, key=lambda c: (_max_key(c[0]), _max_key(c[1])))


@lru_cache(maxsize=None)
def _enumerate(r, s):
    length = r + s
    found = set()
    for positions in combinations(range(length), s):
        chars = [L1] * length
        for p in positions:
            chars[p] = L2
        found.add(canonicalize("".join(chars)))
    return tuple(sorted(found, key=deglex_key, reverse=True))


def enumerate_necklaces(bideg):
    """All necklaces of the given bidegree, strictly descending in deg-lex."""
    r, s = bideg
    if r < 0 or s < 0:
        return []
    return list(_enumerate(r, s))


def necklaces_of_degree(d):
    out = []
    for r in range(d, -1, -1):
        out.extend(_enumerate(r, d - r))
    return out


def swap_letters(necklace):
    """Exchange A and B and re-canonicalize."""
    return canonicalize(necklace.translate(_SWAP))


_ITEM = re.compile(r"([A-Za-z])(?:\^(\d+))?")


def parse_word(text):
    """Parse ``A^3B^2``-style text into ``(word, alphabet)``.

    ``word`` uses the internal letters A/B; ``alphabet`` is ``"AB"`` or
    ``"XY"`` (``None`` for the empty word).  ``"1"`` or ``""`` denote the
    empty word.
    """
    compact = "".join(text.split())
    if compact in ("", "1"):
        return "", None
    pos = 0
    letters = []
    used = set()
    while pos < len(compact):
        m = _ITEM.match(compact, pos)
        if not m:
            raise WordSyntaxError(f"cannot parse {text!r} at position {pos}")
        letter, exp = m.group(1), m.group(2)
        if letter not in _TO_INTERNAL:
            raise WordSyntaxError(f"unknown letter {letter!r} in {text!r}")
        count = 1 if exp is None else int(exp)
        if count == 0:
            raise WordSyntaxError(f"zero exponent in {text!r}")
        used.add(letter)
        letters.append(_TO_INTERNAL[letter] * count)
        pos = m.end()
    if used & set("AB") and used & set("XY"):
        raise WordSyntaxError(f"mixed alphabets in {text!r}")
    alphabet = GENERIC_ALPHABET if used & set("XY") else TRACELESS_ALPHABET
    return "".join(letters), alphabet


def render(word, alphabet=TRACELESS_ALPHABET):
    """Exponent-compressed text of ``word`` (not canonicalized here)."""
    if not word:
        return "1"
    table = {"A": alphabet[0], "B": alphabet[1]}
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        out.append(table[word[i]] + (f"^{run}" if run > 1 else ""))
        i = j
    return "".join(out)


def parse_necklace(text):
    word, _ = parse_word(text)
    return canonicalize(word)
