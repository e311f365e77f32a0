"""Degree-by-degree mining of necklace expressions and defining relations.

Mining happens in the traceless arena (generators a3, a4, ...).  For each
bidegree (r, s) with r >= s, the unknowns are the traces of the non-CH_n
necklaces; equations come from generator expansions, the commutator-power
equation at (m, m), and breaking pairs in canonical order.  An equation
that contradicts the current system yields a polynomial that must vanish:
a relation.  Mirror bidegrees are filled by the A <-> B swap.
"""

import re
import time
from dataclasses import dataclass, field
from itertools import product

from .bracket import traceless_bracket, traceless_bracket_terms
from .generators import CUSTOM, ring_for
from .hilbert import relation_space_dims
from .linalg import INCONSISTENT, EquationSystem, GradedSpan
from .necklace import bidegree, deglex_key, enumerate_necklaces, is_chn, render, swap_letters
from .polynomial import Poly, mono_exponents, var_mono
from .reducer import ExpressionTable, Reducer
from .tracepoly import NecklaceSum


@dataclass(frozen=True)
class BreakingPair:
    first: str
    second: str
    target: tuple


def is_breaking_pair(first, second, target, n, support=None):
    """The four defining conditions, checked literally."""
    if support is None:
        support = ring_for(n).support()
    b1, b2 = bidegree(first), bidegree(second)
    if (b1[0] + b2[0], b1[1] + b2[1]) != (target[0] + 1, target[1] + 1):
        return False
    if len(first) < 2 or deglex_key(first) >= deglex_key(second):
        return False
    if len(first) == 2 and not is_chn(second, n):
        return False
    return first not in support or second not in support


def breaking_pairs(target, n, support=None, relaxed=False):
    """Breaking pairs for ``target``, ascending by (first, second) in deg-lex.

    ``relaxed=True`` instead returns the pairs that meet the first three
    conditions but fail the support condition (both traces are terms of
    generator expansions).  Those are the fallback equations when the strict
    pairs leave a bidegree underdetermined.
    """
    if support is None:
        support = ring_for(n).support()
    r, s = target
    out = []
    for r1 in range(r + 2):
        for s1 in range(s + 2):
            if r1 + s1 < 2:
                continue
            b2 = (r + 1 - r1, s + 1 - s1)
            if b2[0] + b2[1] < r1 + s1:
                continue
            for w1, w2 in product(enumerate_necklaces((r1, s1)), enumerate_necklaces(b2)):
                if relaxed:
                    keep = (not is_breaking_pair(w1, w2, target, n, support)
                            and is_breaking_pair(w1, w2, target, n, frozenset()))
                else:
                    keep = is_breaking_pair(w1, w2, target, n, support)
                if keep:
                    out.append(BreakingPair(w1, w2, tuple(target)))
    out.sort(key=lambda p: (deglex_key(p.first), deglex_key(p.second)))
    return out


def shift(p, mono):
    return Poly._raw({m + mono: c for m, c in p.terms.items()})


class RelationIdeal:
    """Relations found so far, with lazily built graded pieces of the ideal."""

    def __init__(self, n):
        self.ring = ring_for(n)
        self.relations = []  # (bidegree, canonical Poly)
        self._spans = {}
        self._key = self.ring.order_key(CUSTOM)

    def __len__(self):
        return len(self.relations)

    def at(self, b):
        return [p for bb, p in self.relations if bb == tuple(b)]

    def span(self, b):
        b = tuple(b)
        sp = self._spans.get(b)
        if sp is None:
            sp = GradedSpan(self._key)
            for bb, rho in self.relations:
                self._insert_multiples(sp, b, bb, rho)
            self._spans[b] = sp
        return sp

    def _insert_multiples(self, sp, b, bb, rho):
        q = (b[0] - bb[0], b[1] - bb[1])
        if q[0] < 0 or q[1] < 0:
            return
        for m in self.ring.graded_basis(q):
            sp.insert(shift(rho, m))

    def reduce(self, p, b):
        return self.span(b).reduce(p)

    def contains(self, p, b):
        return not self.reduce(p, b)

    def add(self, p, b):
        """Insert ``p`` unless it already lies in the ideal; returns the stored relation or None."""
        b = tuple(b)
        r = self.reduce(p, b)
        if not r:
            return None
        rho = self.ring.canonical(r)
        self.relations.append((b, rho))
        for bb, sp in self._spans.items():
            self._insert_multiples(sp, bb, b, rho)
        return rho

    def graded_dim(self, d):
        return sum(len(self.span((r, d - r))) for r in range(d + 1))


def ideal_graded_dim(ideal, d):
    return ideal.graded_dim(d)


@dataclass
class MineConfig:
    n: int = 4
    max_degree: int = 13
    seed: int = 0
    special: bool = True
    propagate: bool = True
    order: str = CUSTOM

    def header(self):
        return (f"n={self.n} max_degree={self.max_degree} seed={self.seed} "
                f"order={self.order} special={int(self.special)} propagate={int(self.propagate)}")


@dataclass
class BidegreeReport:
    bidegree: tuple
    unknowns: int
    equations: int
    rank: int
    relations: int
    source: list = field(default_factory=list)

    def line(self):
        src = ",".join(self.source) if self.source else "-"
        return (f"bidegree {self.bidegree}: unknowns={self.unknowns} equations={self.equations} "
                f"rank={self.rank} relations={self.relations} sources={src}")


@dataclass
class MineResult:
    config: MineConfig
    table: ExpressionTable
    ideal: RelationIdeal
    log: list
    unfilled: dict  # degree -> remaining deficit
    reports: list
    seconds: float = 0.0

    @property
    def complete(self):
        return not self.unfilled


class Miner:
    def __init__(self, config):
        self.config = config
        self.n = config.n
        self.ring = ring_for(self.n)
        self.reducer = Reducer(self.n)
        self.table = self.reducer.table
        self.ideal = RelationIdeal(self.n)
        self.support = self.ring.support()
        self.log = []
        self.reports = []
        self.unfilled = {}
        self.expected = relation_space_dims(self.n, config.max_degree)
        self._gen_brackets = {}
        self._circular = {}
        self.degree = 0
        self.sources = {}  # relation position -> how it was found

    # -- bracket helpers ----------------------------------------------------
    def gen_bracket(self, i, j):
        """Reduced {a_i, a_j}; only valid below the current degree."""
        if i == j:
            return Poly()
        if i > j:
            return -self.gen_bracket(j, i)
        key = (i, j)
        hit = self._gen_brackets.get(key)
        if hit is None:
            raw = traceless_bracket(self.ring.expansions[i], self.ring.expansions[j], self.n)
            hit = self.reducer.reduce_trace_poly(raw)
            self._gen_brackets[key] = hit
        return hit

    def bracket_degree(self, i, j):
        return self.ring.deg[i] + self.ring.deg[j] - 2

    def adjoint(self, i, p, circular=None):
        """{a_i, p} by the derivation rule; degree-d generator brackets go to ``circular``."""
        out = Poly()
        d = self.degree
        for m, c in p.terms.items():
            for j, e in mono_exponents(m):
                if circular is not None and m == var_mono(j) and self.bracket_degree(i, j) == d:
                    circular.append((i, j, c))
                    continue
                br = self.gen_bracket(i, j)
                if br:
                    out.iadd_mul(br, Poly._raw({m - var_mono(j): c * e}))
        return out

    def poly_bracket(self, p, q, circular=None):
        out = Poly()
        for i in p.variables():
            dp = p.derivative(i)
            circ = [] if circular is not None else None
            ad = self.adjoint(i, q, circ)
            if ad:
                out.iadd_mul(dp, ad)
            if circ:
                k = dp.constant_term()
                circular.extend((a, b, k * c) for a, b, c in circ)
        return out

    # -- equations ----------------------------------------------------------
    def split(self, items, b):
        """Linear form over unknown traces of bidegree ``b`` plus a known Poly."""
        coeffs = {}
        known = Poly()
        for v, c in items:
            if len(v) == self.degree and bidegree(v) == b and not self.reducer.known(v):
                coeffs[v] = coeffs.get(v, 0) + c
            else:
                known.iadd(self.reducer.reduce(v), c)
        return {v: c for v, c in coeffs.items() if c}, known

    def _raw_bracket(self, s1, s2, b):
        coeffs, known = {}, Poly()
        for w1, c1 in s1.terms.items():
            for w2, c2 in s2.terms.items():
                linear, products = traceless_bracket_terms(w1, w2, self.n)
                lc, lk = self.split(((v, c * c1 * c2) for v, c in linear.items()), b)
                for v, c in lc.items():
                    coeffs[v] = coeffs.get(v, 0) + c
                known.iadd(lk)
                for (v1, v2), c in products.items():
                    known.iadd_mul(self.reducer.reduce(v1), self.reducer.reduce(v2), c * c1 * c2)
        return {v: c for v, c in coeffs.items() if c}, known

    def circular_bracket(self, i, j, b):
        key = (i, j)
        if key not in self._circular:
            self._circular[key] = self._raw_bracket(self.ring.expansions[i], self.ring.expansions[j], b)
        return self._circular[key]

    def pair_equation(self, pair):
        b = pair.target
        coeffs, known = self._raw_bracket(NecklaceSum.single(pair.first), NecklaceSum.single(pair.second), b)
        p1 = self.reducer.reduce(pair.first)
        p2 = self.reducer.reduce(pair.second)
        circular = []
        rhs = self.poly_bracket(p1, p2, circular)
        rhs.iadd(known, -1)
        for i, j, c in circular:
            cc, ck = self.circular_bracket(i, j, b)
            for v, x in cc.items():
                coeffs[v] = coeffs.get(v, 0) - c * x
            rhs.iadd(ck, c)
        return {v: c for v, c in coeffs.items() if c}, rhs

    def generator_equation(self, g, b):
        coeffs, known = self.split(self.ring.expansions[g].terms.items(), b)
        rhs = Poly.var(g)
        rhs.iadd(known, -1)
        return coeffs, rhs

    def special_equation(self, m, b):
        expansion = self.reducer.commutator_power(m, "expand")
        coeffs, known = self.split(expansion.terms.items(), b)
        rhs = self.reducer.commutator_power(m, "reduce").copy()
        rhs.iadd(known, -1)
        return coeffs, rhs

    # -- relations ----------------------------------------------------------
    def add_relation(self, p, b, source):
        added = []
        rho = self.ideal.add(p, b)
        if rho is None:
            return added
        self.sources[len(self.ideal.relations) - 1] = source
        added.append(rho)
        mb = (b[1], b[0])
        mirror = self.ring.swap(rho)
        rho2 = self.ideal.add(mirror, mb)
        if rho2 is not None:
            self.sources[len(self.ideal.relations) - 1] = f"mirror:{source}"
            added.append(rho2)
        return added

    def degree_deficit(self, d):
        return self.expected[d] - self.ideal.graded_dim(d)

    def propagate_into(self, b):
        """Candidates {a5, rho} from (r+1, s-1) and {a6, rho} from (r-2, s+1)."""
        r, s = b
        found = 0
        for seed, src in ((5, (r + 1, s - 1)), (6, (r - 2, s + 1))):
            if src[0] < 0 or src[1] < 0:
                continue
            for rho in list(self.ideal.at(src)):
                cand = self.adjoint(seed, rho)
                if cand and self.degree_deficit(self.degree) > 0:
                    found += len(self.add_relation(cand, b, f"a{seed}"))
        return found

    # -- driver -------------------------------------------------------------
    def unknowns(self, b):
        return [v for v in enumerate_necklaces(b) if not self.reducer.known(v)]

    def equation_stream(self, b):
        r, s = b
        if r == s and self.config.special and r >= 2:
            yield "special", self.special_equation(r, b)
        for g in self.ring.traceless_indices:
            if self.ring.bideg[g] == b:
                yield f"a{g}", self.generator_equation(g, b)
        for pair in breaking_pairs(b, self.n, self.support):
            yield f"({render(pair.first)},{render(pair.second)})", self.pair_equation(pair)
        # support condition dropped: only reached when the strict pairs run out
        for pair in breaking_pairs(b, self.n, self.support, relaxed=True):
            yield f"({render(pair.first)},{render(pair.second)})*", self.pair_equation(pair)

    def feed(self, state, stop):
        b = state["b"]
        system = state["system"]
        if stop():
            return True
        for label, (coeffs, rhs) in state["stream"]:
            state["equations"] += 1
            status, residual = system.add(coeffs, rhs)
            if status == INCONSISTENT:
                new = self.add_relation(residual, b, label)
                state["relations"] += len(new)
                if new:
                    state["sources"].append(label)
            if stop():
                return True
        return False

    def process_bidegree(self, b):
        state = {
            "b": b,
            "system": EquationSystem(self.unknowns(b)),
            "stream": self.equation_stream(b),
            "equations": 0,
            "relations": 0,
            "sources": [],
        }
        if self.config.propagate and self.ideal.relations:
            state["relations"] += self.propagate_into(b)
        self.feed(state, lambda: state["system"].full_rank())
        return state

    def store_solution(self, state):
        system = state["system"]
        if not system.full_rank():
            return False
        b = state["b"]
        for v, p in system.solution().items():
            self.table.set(v, p)
            if b[0] != b[1]:
                self.table.set(swap_letters(v), self.ring.swap(p))
        return True

    def process_degree(self, d):
        self.degree = d
        states = []
        for r in range(d, (d - 1) // 2, -1):
            b = (r, d - r)
            if r < d - r:
                break
            state = self.process_bidegree(b)
            self.store_solution(state)
            states.append(state)
        if self.degree_deficit(d) > 0:
            for state in states:
                self.feed(state, lambda: self.degree_deficit(d) <= 0)
                if self.degree_deficit(d) <= 0:
                    break
        for state in states:
            if not state["system"].full_rank():
                self.log.append(f"degree {d} bidegree {state['b']}: system rank {state['system'].rank} "
                                f"of {len(state['system'].unknowns)} (diagnostic)")
            rep = BidegreeReport(state["b"], len(state["system"].unknowns), state["equations"],
                                 state["system"].rank, state["relations"], state["sources"])
            self.reports.append(rep)
            self.log.append(rep.line())
        # CH necklaces of this degree enter the table too
        for r in range(d + 1):
            for v in enumerate_necklaces((r, d - r)):
                if is_chn(v, self.n):
                    self.reducer.reduce(v)
        remaining = self.degree_deficit(d)
        self.log.append(f"degree {d}: expected relation dim {self.expected[d]}, "
                        f"ideal dim {self.ideal.graded_dim(d)}, deficit {remaining}, "
                        f"relations so far {len(self.ideal)}")
        if remaining > 0:
            self.unfilled[d] = remaining
        elif remaining < 0:
            raise AssertionError(f"degree {d}: ideal exceeds the Hilbert series by {-remaining}")
        self.table.frontier = d

    def run(self, start=2):
        t0 = time.perf_counter()
        for d in range(start, self.config.max_degree + 1):
            self.process_degree(d)
        return MineResult(self.config, self.table, self.ideal, self.log, dict(self.unfilled),
                          self.reports, time.perf_counter() - t0)


def mine(n, max_degree, config=None, **kw):
    if n not in (2, 3, 4):
        raise ValueError(f"mining supports n in (2, 3, 4), got {n}")
    if max_degree < 4:
        raise ValueError("max_degree must be at least 4")
    cfg = config or MineConfig(n=n, max_degree=max_degree, **kw)
    return Miner(cfg).run()


def propagate(miner, seed, source):
    """Bracket ``a_seed`` with every relation of bidegree ``source``."""
    out = []
    for rho in miner.ideal.at(source):
        cand = miner.adjoint(seed, rho)
        if cand:
            out.append(miner.ring.canonical(cand))
    return out


# -- relation files ----------------------------------------------------------

RELATIONS_HEADER = "# relations v1 n={n} max_degree={max_degree} seed={seed}"


def dump_relations(relations, n, max_degree, seed, extra="", order=CUSTOM):
    ring = ring_for(n)
    lines = [RELATIONS_HEADER.format(n=n, max_degree=max_degree, seed=seed) + (f" {extra}" if extra else "")]
    for b, p in relations:
        lines.append(f"({b[0]},{b[1]}): {ring.format(p, order)}")
    return "\n".join(lines) + "\n"


def load_relations(text):
    """Parse a relation file; returns (header fields, [(bidegree, Poly)])."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# relations v1"):
        raise ValueError("missing '# relations v1' header")
    fields = dict(re.findall(r"(\w+)=(\S+)", lines[0]))
    n = int(fields["n"])
    ring = ring_for(n)
    out = []
    for ln in lines[1:]:
        if ln.startswith("#"):
            continue
        m = re.match(r"\((\d+),(\d+)\):\s*(.*)$", ln)
        if not m:
            raise ValueError(f"bad relation line {ln!r}")
        out.append(((int(m.group(1)), int(m.group(2))), ring.parse(m.group(3))))
    return fields, out
