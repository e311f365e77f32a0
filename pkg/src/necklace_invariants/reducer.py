"""Cayley-Hamilton reduction of necklace traces to generator polynomials.

Everything here lives in the traceless arena: letters A, B with
Tr A = Tr B = 0, and the central scalars a1, a2 kept as ring variables.
"""

import re

from gmpy2 import mpq

from .generators import COMM, NCPoly, ring_for
from .necklace import bidegree, canonicalize, find_ch_decomposition, is_chn, parse_necklace, render
from .polynomial import Poly
from .tracepoly import SCALARS, NecklaceSum


class UnreachableNecklace(KeyError):
    """The necklace lies beyond what the table and CH substitution can reach."""


def newton_elementary(p, n):
    """Elementary symmetric functions ``[c0 = 1, c1, ..., cn]`` from power sums.

    ``p[k - 1]`` is the k-th power sum; works for numbers and Polys alike.
    """
    c = [Poly.const(1) if isinstance(p[0], Poly) else mpq(1)]
    for k in range(1, n + 1):
        acc = c[0] * 0
        for i in range(1, k + 1):
            term = c[k - i] * p[i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        c.append(acc * mpq(1, k))
    return c


def power_sum_from_elementary(c, lower, n):
    """``p_n`` from ``c1..cn`` and ``lower = [p0 = n, p1, ..., p_{n-1}]``."""
    acc = Poly()
    for k in range(1, n + 1):
        sign = 1 if k % 2 == 1 else -1
        if k == n:
            acc.iadd(c[n], sign * n)
        else:
            acc.iadd(c[k] * lower[n - k], sign)
    return acc


class ExpressionTable:
    """Map necklace -> generator polynomial, with a completeness frontier."""

    HEADER = "# expr-table v1 n={n}"

    def __init__(self, n):
        self.n = n
        self.entries = {}
        self.frontier = 0

    def __contains__(self, v):
        return v in self.entries

    def __getitem__(self, v):
        return self.entries[v]

    def get(self, v):
        return self.entries.get(v)

    def set(self, v, p):
        self.entries[v] = p

    def __len__(self):
        return len(self.entries)

    def necklaces(self, max_degree=None):
        out = [v for v in self.entries if max_degree is None or len(v) <= max_degree]
        return sorted(out, key=lambda v: (len(v), bidegree(v), v))

    def dumps(self, max_degree=None, order="custom", extra_header=""):
        ring = ring_for(self.n)
        lines = [self.HEADER.format(n=self.n) + extra_header]
        for v in self.necklaces(max_degree):
            lines.append(f"{render(v)} = {ring.format(self.entries[v], order)}")
        return "\n".join(lines) + "\n"

    def save(self, path, **kw):
        with open(path, "w") as fh:
            fh.write(self.dumps(**kw))

    @classmethod
    def loads(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        m = re.match(r"# expr-table v1 n=(\d+)", lines[0]) if lines else None
        if not m:
            raise ValueError("missing '# expr-table v1 n=<n>' header")
        table = cls(int(m.group(1)))
        ring = ring_for(table.n)
        for ln in lines[1:]:
            if ln.startswith("#"):
                continue
            lhs, _, rhs = ln.partition("=")
            table.set(parse_necklace(lhs.strip()), ring.parse(rhs))
        if table.entries:
            table.frontier = max(len(v) for v in table.entries)
        return table

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.loads(fh.read())


class Reducer:
    """Reduce traces of necklaces (and sums/products of them) to generators."""

    def __init__(self, n, table=None):
        self.n = n
        self.ring = ring_for(n)
        self.table = table if table is not None else ExpressionTable(n)
        self.lookup = {}
        for g in self.ring.generators:
            if g.scalar:
                continue
            exp = self.ring.expansions[g.index]
            if len(exp) == 1:
                (v, c), = exp.terms.items()
                self.lookup[v] = Poly.var(g.index, 1 / c)
        self._det_letter = {}
        self._commutator_sums = None

    # -- entry points -------------------------------------------------------
    def reduce(self, v):
        v = canonicalize(v)
        if not v:
            return Poly.const(self.n)
        if len(v) == 1:
            return Poly()
        hit = self.lookup.get(v)
        if hit is not None:
            return hit
        hit = self.table.get(v)
        if hit is not None:
            return hit
        if is_chn(v, self.n):
            p = self.ch_substitute(v)
            self.table.set(v, p)
            return p
        raise UnreachableNecklace(f"no expression for T({render(v)}) (n={self.n})")

    def known(self, v):
        v = canonicalize(v)
        return len(v) <= 1 or v in self.lookup or v in self.table or is_chn(v, self.n)

    def reduce_sum(self, s):
        out = Poly()
        for v, c in s.terms.items():
            out.iadd(self.reduce(v), c)
        return out

    def reduce_trace_poly(self, f):
        """TracePolynomial (traceless interpretation) -> Poly."""
        out = Poly()
        for mono, c in f.terms.items():
            term = Poly.const(c)
            for var in mono:
                if var in SCALARS:
                    term = term * Poly.var(1 if var == "a1" else 2)
                else:
                    term = term * self.reduce(var)
                if not term:
                    break
            out.iadd(term)
        return out

    # -- Cayley-Hamilton ----------------------------------------------------
    def power_sums(self, u, upto):
        """``[p1, ..., p_upto]`` for the word ``u``."""
        return [self.reduce(u * k) for k in range(1, upto + 1)]

    def det_letter(self, letter):
        if letter not in self._det_letter:
            p = self.power_sums(letter, self.n)
            self._det_letter[letter] = newton_elementary(p, self.n)[self.n]
        return self._det_letter[letter]

    def det_word(self, b):
        r, s = b
        return self.det_letter("A") ** r * self.det_letter("B") ** s

    def ch_substitute(self, v, decomposition=None):
        n = self.n
        if decomposition is None:
            decomposition = find_ch_decomposition(v, n)
            if decomposition is None:
                raise ValueError(f"T({render(v)}) is not CH_{n}")
        u, tail = decomposition
        p = self.power_sums(u, n - 1)
        # c_n via det multiplicativity: no circularity when tail is empty
        c = newton_elementary(p + [Poly()], n - 1) + [self.det_word(bidegree(u))]
        if not tail:
            return power_sum_from_elementary(c, [Poly.const(n)] + p, n)
        out = Poly()
        for k in range(1, n + 1):
            sign = 1 if k % 2 == 1 else -1
            out.iadd_mul(c[k], self.reduce(u * (n - k) + tail), sign)
        return out

    # -- commutator powers --------------------------------------------------
    def _commutator_power_sums(self):
        """``p_k = Tr([A,B]^k)`` for k = 1..n via the commutator generators."""
        if self._commutator_sums is None:
            sums = [Poly()]
            for k in range(2, self.n + 1):
                found = None
                for g in self.ring.generators:
                    if g.factors and len(g.factors) == k and all(f.terms == COMM.terms for f in g.factors):
                        found = Poly.var(g.index, 1 / g.coeff)
                if found is None:
                    found = self.reduce_sum(commutator_expansion(k))
                sums.append(found)
            self._commutator_sums = sums
        return self._commutator_sums

    def commutator_power(self, m, mode="reduce"):
        if mode == "expand":
            return commutator_expansion(m)
        if mode != "reduce":
            raise ValueError(f"unknown mode {mode!r}")
        n = self.n
        p = list(self._commutator_power_sums())
        if m <= n:
            return p[m - 1]
        c = newton_elementary(p, n)
        full = [Poly.const(n)] + p
        while len(full) <= m:
            k = len(full)
            acc = Poly()
            for i in range(1, n + 1):
                acc.iadd_mul(c[i], full[k - i], 1 if i % 2 == 1 else -1)
            full.append(acc)
        return full[m]


def commutator_expansion(m):
    """Tr([A,B]^m) as a combination of canonical necklaces."""
    prod = NCPoly({"": 1})
    for _ in range(m):
        prod = prod * COMM
    out = NecklaceSum()
    for w, c in prod.terms.items():
        out.add_term(canonicalize(w), c)
    return out

