"""Generating invariants of pairs of n x n matrices (n = 2, 3, 4) and their ring.

Generators are traces of products of small noncommutative polynomials in
the traceless letters A, B (e.g. ``a16 = Tr([A,B]^2 A)``).  The same
definition feeds both the symbolic necklace expansion and the numeric
matrix evaluation in :mod:`necklace_invariants.oracle`.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from gmpy2 import mpq

from .necklace import canonicalize, swap_letters
from .polynomial import Poly, format_poly, mono_exponents, parse_poly, var_mono
from .tracepoly import NecklaceSum

SUPPORTED_N = (2, 3, 4)


class UnsupportedSize(ValueError):
    pass


class NCPoly:
    """Noncommutative polynomial in A, B: map word -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {w: mpq(c) for w, c in terms.items() if c}

    @classmethod
    def word(cls, w):
        return cls({w: 1})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCPoly(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return NCPoly({w: c * x for w, x in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return NCPoly(out)

    def degree(self):
        return max(len(w) for w in self.terms)

    def bidegree(self):
        w = next(iter(self.terms))
        return (w.count("A"), w.count("B"))


def _w(text):
    return NCPoly.word(text)


COMM = _w("AB") - _w("BA")


@dataclass(frozen=True)
class Generator:
    index: int
    name: str
    label: str
    coeff: mpq
    factors: tuple = ()
    scalar: str = ""  # "X"/"Y" for the generic traces a1, a2
    alias: str = ""
    bidegree: tuple = field(default=(0, 0))

    @property
    def degree(self):
        return self.bidegree[0] + self.bidegree[1]

    @property
    def traceless(self):
        return not self.scalar


def _gen(index, label, coeff, *factors, name=None, alias=""):
    r = sum(f.bidegree()[0] for f in factors)
    s = sum(f.bidegree()[1] for f in factors)
    return Generator(index, name or f"a{index}", label, mpq(coeff), tuple(factors), "", alias, (r, s))


def _common_low():
    A, B = _w("A"), _w("B")
    return [
        Generator(1, "a1", "Tr(X)", mpq(1), (), "X", "", (1, 0)),
        Generator(2, "a2", "Tr(Y)", mpq(1), (), "Y", "", (0, 1)),
        _gen(3, "Tr(A^2)", 1, A * A),
        _gen(4, "Tr(AB)", 1, A * B),
        _gen(5, "Tr(B^2)", 1, B * B),
    ]


def _n4_table():
    A, B = _w("A"), _w("B")
    C = COMM
    ab_sym = _w("AB") + _w("BA")
    return _common_low() + [
        _gen(6, "Tr(A^3)", 1, _w("AAA")),
        _gen(7, "Tr(A^2B)", 1, _w("AAB")),
        _gen(8, "Tr(AB^2)", 1, _w("ABB")),
        _gen(9, "Tr(B^3)", 1, _w("BBB")),
        _gen(10, "Tr(A^4)", 1, _w("AAAA")),
        _gen(11, "Tr(A^3B)", 1, _w("AAAB")),
        _gen(12, "Tr(A^2B^2)", 1, _w("AABB")),
        _gen(13, "Tr(AB^3)", 1, _w("ABBB")),
        _gen(14, "Tr(B^4)", 1, _w("BBBB")),
        _gen(15, "1/2 Tr([A,B]^2)", mpq(1, 2), C, C),
        _gen(16, "Tr([A,B]^2A)", 1, C, C, A),
        _gen(17, "Tr([A,B]^2B)", 1, C, C, B),
        _gen(18, "Tr([A,B]^2A^2)", 1, C, C, _w("AA")),
        _gen(19, "Tr([A,B]^2(AB+BA))", 1, C, C, ab_sym),
        _gen(20, "Tr([A,B]^2B^2)", 1, C, C, _w("BB")),
        _gen(21, "1/3 Tr([A,B]^3)", mpq(1, 3), C, C, C),
        _gen(22, "Tr([A,B]^3A)", 1, C, C, C, A),
        _gen(23, "Tr([A,B]^3B)", 1, C, C, C, B),
        _gen(24, "Tr([A,B]^3A^2)", 1, C, C, C, _w("AA")),
        _gen(25, "1/2 Tr([A,B]^3(AB+BA))", mpq(1, 2), C, C, C, ab_sym),
        _gen(26, "Tr([A,B]^3B^2)", 1, C, C, C, _w("BB")),
        _gen(27, "1/2 Tr([A,B]^4)", mpq(1, 2), C, C, C, C),
        _gen(28, "Tr([A,B]^3A^3)", 1, C, C, C, _w("AAA")),
        _gen(29, "1/3 Tr([A,B]^3(A^2B+ABA+BA^2))", mpq(1, 3), C, C, C,
             _w("AAB") + _w("ABA") + _w("BAA")),
        _gen(30, "1/3 Tr([A,B]^3(AB^2+BAB+B^2A))", mpq(1, 3), C, C, C,
             _w("ABB") + _w("BAB") + _w("BBA")),
        _gen(31, "Tr([A,B]^3B^3)", 1, C, C, C, _w("BBB")),
        _gen(32, "Tr([A,B]^3(A^2B^2-AB^2A-BA^2B+B^2A^2))", 1, C, C, C,
             _w("AABB") - _w("ABBA") - _w("BAAB") + _w("BBAA")),
    ]


def _n3_table():
    C = COMM
    low = _n4_table()[:9]
    return low + [
        _gen(10, "1/2 Tr([A,B]^2)", mpq(1, 2), C, C, name="g10", alias="a15"),
        _gen(11, "1/3 Tr([A,B]^3)", mpq(1, 3), C, C, C, name="g11", alias="a21"),
    ]


@lru_cache(maxsize=None)
def generator_table(n):
    """The generator list for C_{n2}, n in {2, 3, 4}."""
    if n == 2:
        return tuple(_common_low())
    if n == 3:
        return tuple(_n3_table())
    if n == 4:
        return tuple(_n4_table())
    raise UnsupportedSize(f"no generator table for n={n}; supported: {SUPPORTED_N}")


def expand_generator(g):
    """Necklace expansion of a generator's defining trace expression.

    a1, a2 expand to the generic necklaces X and Y (returned as 'A', 'B').
    """
    if g.scalar:
        return NecklaceSum.single("A" if g.scalar == "X" else "B")
    prod = NCPoly({"": 1})
    for f in g.factors:
        prod = prod * f
    out = NecklaceSum()
    for w, c in prod.terms.items():
        out.add_term(canonicalize(w), c * g.coeff)
    return out


CUSTOM = "custom"
GREVLEX = "grevlex"
ORDERS = (CUSTOM, GREVLEX)


class GeneratorRing:
    """Bigraded polynomial ring Q[a_1, ..., a_k] for one matrix size."""

    def __init__(self, n):
        self.n = n
        self.generators = generator_table(n)
        self.by_index = {g.index: g for g in self.generators}
        self.indices = [g.index for g in self.generators]
        self.traceless_indices = [g.index for g in self.generators if g.traceless]
        self.bideg = {g.index: g.bidegree for g in self.generators}
        self.deg = {g.index: g.degree for g in self.generators}
        self.expansions = {g.index: expand_generator(g) for g in self.generators}
        # custom variable order: bidegree lex, equal bidegrees -> larger index smaller
        ranked = sorted(self.indices, key=lambda i: (self.bideg[i], -i))
        self.rank = {i: k for k, i in enumerate(ranked)}
        self._mono_bideg = {}
        self._swap_images = None

    # -- gradings -----------------------------------------------------------
    def mono_bidegree(self, m):
        b = self._mono_bideg.get(m)
        if b is None:
            r = s = 0
            for i, e in mono_exponents(m):
                bi = self.bideg[i]
                r += e * bi[0]
                s += e * bi[1]
            b = (r, s)
            self._mono_bideg[m] = b
        return b

    def mono_degree(self, m):
        r, s = self.mono_bidegree(m)
        return r + s

    def bidegrees(self, p):
        return {self.mono_bidegree(m) for m in p.terms}

    def bihomogeneous_part(self, p, b):
        return Poly({m: c for m, c in p.terms.items() if self.mono_bidegree(m) == b})

    # -- orders -------------------------------------------------------------
    def order_key(self, order=CUSTOM):
        if order == CUSTOM:
            rank = self.rank
            size = len(rank)

            def key(m):
                exps = [0] * size
                for i, e in mono_exponents(m):
                    exps[size - 1 - rank[i]] = e
                return (self.mono_degree(m), tuple(exps))

            return key
        if order == GREVLEX:
            top = max(self.indices)

            def key(m):
                exps = [0] * top
                for i, e in mono_exponents(m):
                    exps[top - i] = -e
                return (self.mono_degree(m), tuple(exps))

            return key
        raise ValueError(f"unknown monomial order {order!r}")

    def leading_monomial(self, p, order=CUSTOM):
        return max(p.terms, key=self.order_key(order))

    def canonical(self, p, order=CUSTOM):
        """Primitive integer multiple with positive leading coefficient."""
        if not p:
            return Poly()
        q = p.primitive()
        if q.terms[self.leading_monomial(q, order)] < 0:
            q = -q
        return q

    def format(self, p, order=CUSTOM):
        return format_poly(p, key=self.order_key(order))

    def parse(self, text):
        p = parse_poly(text)
        for i in p.variables():
            if i not in self.by_index:
                raise ValueError(f"a{i} is not a generator for n={self.n}")
        return p

    # -- bases --------------------------------------------------------------
    def graded_basis(self, b, indices=None, order=CUSTOM):
        """All monomials of exactly bidegree ``b``, descending in ``order``."""
        pool = tuple(self.traceless_indices if indices is None else sorted(indices))
        monos = _graded_monomials(tuple(self.bideg[i] for i in pool), pool, tuple(b))
        return sorted(monos, key=self.order_key(order), reverse=True)

    def monomials_of_degree(self, d, indices=None):
        pool = self.traceless_indices if indices is None else indices
        out = []
        for r in range(d, -1, -1):
            out.extend(self.graded_basis((r, d - r), pool))
        return out

    # -- A <-> B symmetry ---------------------------------------------------
    def swap_images(self):
        if self._swap_images is None:
            self._swap_images = _compute_swap_images(self)
        return self._swap_images

    def swap(self, p):
        return p.substitute(self.swap_images())

    def support(self):
        out = set()
        for i in self.traceless_indices:
            out.update(self.expansions[i].terms)
        return out


@lru_cache(maxsize=None)
def _graded_monomials(bidegs, pool, target):
    out = []

    def rec(k, r, s, mono):
        if r == 0 and s == 0:
            out.append(mono)
            return
        if k == len(pool):
            return
        br, bs = bidegs[k]
        e = 0
        while e * br <= r and e * bs <= s:
            rec(k + 1, r - e * br, s - e * bs, mono + e * var_mono(pool[k]))
            e += 1
            if br == 0 and bs == 0:
                break

    rec(0, target[0], target[1], 0)
    return tuple(out)


def _compute_swap_images(ring):
    from .linalg import linear_solve

    images = {}
    for g in ring.generators:
        if g.scalar:
            images[g.index] = Poly.var(2 if g.index == 1 else 1)
            continue
        swapped = NecklaceSum()
        for v, c in ring.expansions[g.index].terms.items():
            swapped.add_term(swap_letters(v), c)
        target = (g.bidegree[1], g.bidegree[0])
        candidates = [h.index for h in ring.generators if h.traceless and h.bidegree == target]
        necklaces = sorted({v for h in candidates for v in ring.expansions[h].terms} | set(swapped.terms))
        equations = []
        for v in necklaces:
            row = {h: ring.expansions[h].terms.get(v, 0) for h in candidates}
            equations.append((row, Poly.const(swapped.terms.get(v, 0))))
        result = linear_solve(equations, candidates)
        if not result.consistent or not result.complete:
            raise ValueError(f"swap image of a{g.index} is not a combination of generators")
        image = Poly()
        for h in candidates:
            image.iadd(Poly.var(h), result.solution[h].constant_term())
        images[g.index] = image
    return images


@lru_cache(maxsize=None)
def ring_for(n):
    return GeneratorRing(n)


def generator_support(n):
    return ring_for(n).support()


def graded_basis(b, n=4, indices=None, order=CUSTOM):
    return ring_for(n).graded_basis(b, indices, order)


def swap_involution(p, n=4):
    return ring_for(n).swap(p)


# Primary invariants chosen for the Hironaka decomposition of C_42 and the
# secondary invariants listed with it, as generator monomials.
PRIMARY_INDICES_N4 = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 18, 20)
SECONDARY_MONOMIALS_N4 = (
    (),
    (16,), (17,),
    (19,), (21,),
    (22,), (23,),
    (24,), (25,), (26,), (27,),
    (28,), (29,), (30,), (31,),
    (32,), (16, 16), (16, 17), (17, 17),
    (16, 19), (16, 21), (17, 19), (17, 21),
    (19, 21), (21, 21),
    (19, 22), (19, 23), (21, 22), (21, 23),
    (19, 24), (19, 26), (21, 27), (22, 23),
    (22, 24), (23, 24), (23, 25), (23, 26),
    (24, 25), (25, 26), (25, 27), (27, 27),
    (26, 28), (26, 29),
    (27, 32), (29, 30),
    (21, 21, 22), (21, 21, 23),
    (25, 27, 27),
)


def secondary_degrees_n4():
    deg = ring_for(4).deg
    return [sum(deg[i] for i in mono) for mono in SECONDARY_MONOMIALS_N4]


def primary_degrees_n4():
    deg = ring_for(4).deg
    return [deg[i] for i in PRIMARY_INDICES_N4]

