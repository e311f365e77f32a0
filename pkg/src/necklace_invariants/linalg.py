"""Exact linear algebra for systems whose right-hand sides are polynomials.

Coefficient matrices are rational; right-hand sides are :class:`Poly`.
``linear_solve`` is one-shot fraction-free (Bareiss) elimination that also
returns left null-space certificates.  ``EquationSystem`` is the incremental
Gauss-Jordan variant the miner feeds one equation at a time.
"""

from dataclasses import dataclass, field
from math import lcm

from gmpy2 import mpq

from .polynomial import Poly


@dataclass
class Certificate:
    """Left null vector ``y`` (by equation position) with ``y . A = 0``."""

    y: dict
    residual: Poly


@dataclass
class SolveResult:
    consistent: bool
    complete: bool
    rank: int
    solution: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    free: list = field(default_factory=list)


def _integerize(coeffs):
    den = 1
    for c in coeffs.values():
        den = lcm(den, int(mpq(c).denominator))
    return den, {k: int(mpq(c) * den) for k, c in coeffs.items() if c}


def linear_solve(equations, unknowns):
    """Solve ``sum_j A[i][j] x_j = b_i`` exactly.

    ``equations`` is a list of ``(coeffs, rhs)`` with ``coeffs`` a dict
    unknown -> rational and ``rhs`` a Poly.  Pivot choice: first column in
    ``unknowns`` order, first remaining row in input order.  Every
    certificate satisfies ``y . A = 0``; those with nonzero ``y . b`` make the
    system inconsistent.
    """
    col_of = {u: k for k, u in enumerate(unknowns)}
    rows = []
    for idx, (coeffs, rhs) in enumerate(equations):
        for u in coeffs:
            if u not in col_of:
                raise KeyError(f"unknown {u!r} not declared")
        scale, ints = _integerize(coeffs)
        rows.append({
            "a": {col_of[u]: c for u, c in ints.items()},
            "b": rhs.scale(scale) if scale != 1 else rhs.copy(),
            "t": {idx: scale},
        })

    prev = 1
    pivots = []  # (col, row)
    pending = list(rows)
    for col in range(len(unknowns)):
        pick = next((k for k, r in enumerate(pending) if r["a"].get(col)), None)
        if pick is None:
            continue
        prow = pending.pop(pick)
        p = prow["a"][col]
        for r in pending:
            a = r["a"].get(col, 0)
            if a:
                new_a = {}
                for j in set(r["a"]) | set(prow["a"]):
                    v = p * r["a"].get(j, 0) - a * prow["a"].get(j, 0)
                    if v:
                        q, rem = divmod(v, prev)
                        assert rem == 0, "Bareiss division must be exact"
                        new_a[j] = q
                r["a"] = new_a
                new_b = r["b"].scale(p)
                new_b.iadd(prow["b"], -a)
                r["b"] = new_b.scale(mpq(1, prev)) if prev != 1 else new_b
                new_t = {}
                for j in set(r["t"]) | set(prow["t"]):
                    v = p * r["t"].get(j, 0) - a * prow["t"].get(j, 0)
                    if v:
                        new_t[j] = mpq(v, prev)
                r["t"] = new_t
            else:
                # keep the Bareiss invariant: untouched rows still get scaled by p/prev
                if p != prev:
                    f = mpq(p, prev)
                    r["a"] = {j: v * p // prev for j, v in r["a"].items()}
                    r["b"] = r["b"].scale(f)
                    r["t"] = {j: v * f for j, v in r["t"].items()}
        pivots.append((col, prow))
        prev = p

    certificates = []
    for r in pending:
        assert not r["a"]
        if r["t"]:
            certificates.append(Certificate(dict(r["t"]), r["b"]))
    inconsistent = [c for c in certificates if c.residual]

    pivot_cols = {c for c, _ in pivots}
    free = [unknowns[c] for c in range(len(unknowns)) if c not in pivot_cols]
    solution = {}
    if not inconsistent:
        # back substitution, last pivot first
        for col, r in reversed(pivots):
            acc = r["b"].copy()
            determined = True
            for j, v in r["a"].items():
                if j == col:
                    continue
                if unknowns[j] in solution:
                    acc.iadd(solution[unknowns[j]], -v)
                else:
                    determined = False
            if determined:
                solution[unknowns[col]] = acc.scale(mpq(1, r["a"][col]))
    return SolveResult(
        consistent=not inconsistent,
        complete=not free,
        rank=len(pivots),
        solution=solution,
        certificates=inconsistent,
        free=free,
    )


INDEPENDENT = "independent"
DEPENDENT = "dependent"
INCONSISTENT = "inconsistent"


class EquationSystem:
    """Incremental reduced row echelon form over a fixed unknown ordering.

    ``add`` classifies each equation as independent, dependent, or
    inconsistent; for the last it returns the nonzero residual right-hand
    side (a polynomial that must vanish).
    """

    def __init__(self, unknowns):
        self.unknowns = list(unknowns)
        self.col_of = {u: k for k, u in enumerate(self.unknowns)}
        self.rows = {}  # pivot column -> (coeffs {col: mpq}, rhs Poly)

    @property
    def rank(self):
        return len(self.rows)

    def full_rank(self):
        return len(self.rows) == len(self.unknowns)

    def reduce(self, coeffs, rhs):
        a = {self.col_of[u]: mpq(c) for u, c in coeffs.items() if c}
        b = rhs.copy()
        for col in [c for c in a if c in self.rows]:
            k = a.get(col)
            if not k:
                continue
            pa, pb = self.rows[col]
            for j, v in pa.items():
                s = a.get(j, 0) - k * v
                if s:
                    a[j] = s
                else:
                    a.pop(j, None)
            b.iadd(pb, -k)
        return a, b

    def add(self, coeffs, rhs):
        a, b = self.reduce(coeffs, rhs)
        if not a:
            if b:
                return INCONSISTENT, b
            return DEPENDENT, None
        col = min(a)
        inv = 1 / a[col]
        a = {j: v * inv for j, v in a.items()}
        b = b.scale(inv)
        for pcol, (pa, pb) in self.rows.items():
            k = pa.get(col)
            if k:
                for j, v in a.items():
                    s = pa.get(j, 0) - k * v
                    if s:
                        pa[j] = s
                    else:
                        pa.pop(j, None)
                pb.iadd(b, -k)
        self.rows[col] = (a, b)
        return INDEPENDENT, None

    def solution(self):
        """Values of the unknowns; only meaningful once ``full_rank()``."""
        if not self.full_rank():
            missing = [u for k, u in enumerate(self.unknowns) if k not in self.rows]
            raise ValueError(f"system not full rank; undetermined: {missing}")
        return {self.unknowns[col]: b for col, (_, b) in self.rows.items()}


class GradedSpan:
    """Echelon basis of a subspace of polynomials, keyed by leading monomial."""

    def __init__(self, key):
        self.key = key
        self.basis = {}  # leading monomial -> poly with that leading coeff 1

    def __len__(self):
        return len(self.basis)

    def reduce(self, p):
        p = p.copy()
        key = self.key
        while p.terms:
            hits = [m for m in p.terms if m in self.basis]
            if not hits:
                break
            m = max(hits, key=key)
            p.iadd(self.basis[m], -p.terms[m])
        return p

    def insert(self, p):
        """Add ``p``; returns the nonzero reduced remainder or None."""
        r = self.reduce(p)
        if not r:
            return None
        lead = max(r.terms, key=self.key)
        self.basis[lead] = r.scale(1 / r.terms[lead])
        return r

    def contains(self, p):
        return not self.reduce(p)
