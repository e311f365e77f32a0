"""Exact numeric oracle: sampled matrix pairs, evaluation, and a matrix-calculus bracket.

All arithmetic is over the rationals (numpy object arrays of ``mpq``), so an
identity passes only when it evaluates to exactly zero.  Acceptance is
probabilistic in the usual Schwartz-Zippel sense: a nonzero polynomial
identity of degree D survives ``max(20, D + 1)`` independent samples with
entry bound >= 10 only with negligible probability.
"""

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from .generators import ring_for
from .necklace import canonicalize
from .polynomial import Poly
from .tracepoly import GENERIC, SCALARS, TRACELESS, NecklaceSum, TracePolynomial

GENERIC_SAMPLER = "generic"
COMMUTING_SAMPLER = "commuting"
CM_SAMPLER = "cm"
SAMPLERS = (GENERIC_SAMPLER, COMMUTING_SAMPLER, CM_SAMPLER)


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    bound: int = 10


def _matrix(rows):
    m = np.empty((len(rows), len(rows)), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            m[i, j] = mpq(x)
    return m


def identity(n):
    return _matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def zeros(n):
    return _matrix([[0] * n for _ in range(n)])


def trace(m):
    return sum((m[i, i] for i in range(m.shape[0])), mpq(0))


def format_matrix(m):
    """Row-major bracket syntax, e.g. ``[[1, -2/3], [0, 5]]``."""
    return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in m) + "]"


@dataclass
class MatrixPair:
    X: np.ndarray
    Y: np.ndarray
    sampler: str = "given"
    seed: str = ""

    @property
    def n(self):
        return self.X.shape[0]

    @classmethod
    def from_rows(cls, x_rows, y_rows, sampler="given"):
        return cls(_matrix(x_rows), _matrix(y_rows), sampler)

    def describe(self):
        return f"X = {format_matrix(self.X)}\nY = {format_matrix(self.Y)}  ({self.sampler}, seed {self.seed})"


def _rng(cfg, sampler, n, trial):
    return random.Random(f"{cfg.seed}:{sampler}:{n}:{trial}")


def sample_generic(n, cfg=SamplerConfig(), trial=0):
    rng = _rng(cfg, GENERIC_SAMPLER, n, trial)
    b = cfg.bound
    x = [[rng.randint(-b, b) for _ in range(n)] for _ in range(n)]
    y = [[rng.randint(-b, b) for _ in range(n)] for _ in range(n)]
    return MatrixPair(_matrix(x), _matrix(y), GENERIC_SAMPLER, f"{cfg.seed}/{trial}")


def sample_commuting(n, cfg=SamplerConfig(), trial=0):
    """X generic, Y a random integer polynomial of degree < n in X."""
    rng = _rng(cfg, COMMUTING_SAMPLER, n, trial)
    b = cfg.bound
    X = _matrix([[rng.randint(-b, b) for _ in range(n)] for _ in range(n)])
    Y = zeros(n)
    power = identity(n)
    for _ in range(n):
        Y = Y + power * mpq(rng.randint(-b, b))
        power = power.dot(X)
    return MatrixPair(X, Y, COMMUTING_SAMPLER, f"{cfg.seed}/{trial}")


def sample_cm(n, cfg=SamplerConfig(), trial=0, attempts=100):
    """Diagonal X with distinct entries and Cauchy-form Y: [X,Y] + I is all ones."""
    rng = _rng(cfg, CM_SAMPLER, n, trial)
    b = max(cfg.bound, n)
    for _ in range(attempts):
        xs = [rng.randint(-b, b) for _ in range(n)]
        if len(set(xs)) == n:
            break
    else:
        raise SamplingError("could not draw distinct diagonal entries")
    ps = [rng.randint(-b, b) for _ in range(n)]
    X = _matrix([[xs[i] if i == j else 0 for j in range(n)] for i in range(n)])
    Y = _matrix([[ps[i] if i == j else mpq(1, xs[i] - xs[j]) for j in range(n)] for i in range(n)])
    return MatrixPair(X, Y, CM_SAMPLER, f"{cfg.seed}/{trial}")


SAMPLE = {GENERIC_SAMPLER: sample_generic, COMMUTING_SAMPLER: sample_commuting, CM_SAMPLER: sample_cm}


def sample(kind, n, cfg=SamplerConfig(), trial=0):
    try:
        return SAMPLE[kind](n, cfg, trial)
    except KeyError:
        raise ValueError(f"unknown sampler {kind!r}; choose from {SAMPLERS}") from None


class Evaluator:
    """Caches word products for one matrix pair."""

    def __init__(self, pair):
        self.pair = pair
        n = pair.n
        self.n = n
        ident = identity(n)
        self.trX = trace(pair.X)
        self.trY = trace(pair.Y)
        self.letters = {
            GENERIC: {"A": pair.X, "B": pair.Y},
            TRACELESS: {
                "A": pair.X - ident * (self.trX / n),
                "B": pair.Y - ident * (self.trY / n),
            },
        }
        self._words = {GENERIC: {"": ident}, TRACELESS: {"": ident}}
        self._traces = {GENERIC: {}, TRACELESS: {}}
        self._generators = None

    def word(self, w, interpretation=TRACELESS):
        cache = self._words[interpretation]
        m = cache.get(w)
        if m is None:
            m = self.word(w[:-1], interpretation).dot(self.letters[interpretation][w[-1]])
            cache[w] = m
        return m

    def necklace(self, v, interpretation=TRACELESS):
        v = canonicalize(v)
        cache = self._traces[interpretation]
        t = cache.get(v)
        if t is None:
            t = trace(self.word(v, interpretation))
            cache[v] = t
        return t

    def necklace_sum(self, s, interpretation=TRACELESS):
        return sum((c * self.necklace(v, interpretation) for v, c in s.terms.items()), mpq(0))

    def trace_poly(self, f):
        total = mpq(0)
        for mono, c in f.terms.items():
            term = c
            for var in mono:
                if var in SCALARS:
                    term *= self.trX if var == "a1" else self.trY
                else:
                    term *= self.necklace(var, f.interpretation)
            total += term
        return total

    def ncpoly(self, p):
        out = zeros(self.n)
        for w, c in p.terms.items():
            out = out + self.word(w) * c
        return out

    def generators(self):
        """Generator values from their defining products (not the necklace expansions)."""
        if self._generators is None:
            ring = ring_for(self.n)
            vals = {}
            for g in ring.generators:
                if g.scalar:
                    vals[g.index] = self.trX if g.scalar == "X" else self.trY
                    continue
                m = identity(self.n)
                for f in g.factors:
                    m = m.dot(self.ncpoly(f))
                vals[g.index] = g.coeff * trace(m)
            self._generators = vals
        return self._generators

    def genpoly(self, p):
        return p.evaluate(self.generators())


def eval_necklace(v, pair, interpretation=TRACELESS):
    return Evaluator(pair).necklace(v, interpretation)


def eval_genpoly(p, pair):
    return Evaluator(pair).genpoly(p)


def evaluate(expr, pair, evaluator=None):
    """Evaluate a Poly, TracePolynomial, NecklaceSum, or necklace word."""
    ev = evaluator or Evaluator(pair)
    if isinstance(expr, Poly):
        return ev.genpoly(expr)
    if isinstance(expr, TracePolynomial):
        return ev.trace_poly(expr)
    if isinstance(expr, NecklaceSum):
        return ev.necklace_sum(expr)
    if isinstance(expr, str):
        return ev.necklace(expr)
    if callable(expr):
        return expr(pair)
    raise TypeError(f"cannot evaluate {type(expr).__name__}")


# -- matrix-calculus bracket ------------------------------------------------

def _project(G, n):
    """Gradient through the traceless shift: G - Tr(G)/n * I."""
    return G - identity(n) * (trace(G) / n)


def _word_gradients(ev, v, interpretation):
    """(D_X, D_Y): sums of cyclic remainders at each occurrence of each letter."""
    n = ev.n
    grads = {"A": zeros(n), "B": zeros(n)}
    for i, letter in enumerate(v):
        grads[letter] = grads[letter] + ev.word(v[i + 1:] + v[:i], interpretation)
    if interpretation == TRACELESS:
        return _project(grads["A"], n), _project(grads["B"], n)
    return grads["A"], grads["B"]


def _trace_poly_gradient(ev, f):
    n = ev.n
    DX, DY = zeros(n), zeros(n)
    ident = identity(n)
    values = {}
    for mono in f.terms:
        for var in mono:
            if var not in values:
                if var in SCALARS:
                    values[var] = ev.trX if var == "a1" else ev.trY
                else:
                    values[var] = ev.necklace(var, f.interpretation)
    for mono, c in f.terms.items():
        for k, var in enumerate(mono):
            if k and mono[k - 1] == var:
                continue
            rest = list(mono)
            rest.remove(var)
            coeff = c * mono.count(var)
            for other in rest:
                coeff *= values[other]
            if not coeff:
                continue
            if var == "a1":
                DX = DX + ident * coeff
            elif var == "a2":
                DY = DY + ident * coeff
            else:
                gx, gy = _word_gradients(ev, var, f.interpretation)
                DX = DX + gx * coeff
                DY = DY + gy * coeff
    return DX, DY


def _genpoly_gradient(ev, p):
    n = ev.n
    ring = ring_for(n)
    values = ev.generators()
    DX, DY = zeros(n), zeros(n)
    ident = identity(n)
    for i in p.variables():
        d = p.derivative(i).evaluate(values)
        if not d:
            continue
        g = ring.by_index[i]
        if g.scalar == "X":
            DX = DX + ident * d
        elif g.scalar == "Y":
            DY = DY + ident * d
        else:
            for v, c in ring.expansions[i].terms.items():
                gx, gy = _word_gradients(ev, v, TRACELESS)
                DX = DX + gx * (d * c)
                DY = DY + gy * (d * c)
    return DX, DY


def _gradient(ev, f):
    if isinstance(f, Poly):
        return _genpoly_gradient(ev, f)
    if isinstance(f, str):
        f = TracePolynomial.trace(TRACELESS, ev.n, f)
    if isinstance(f, NecklaceSum):
        f = TracePolynomial.from_necklace_sum(TRACELESS, ev.n, f)
    return _trace_poly_gradient(ev, f)


def numeric_poisson(f, g, pair, evaluator=None):
    """{f, g} = Tr(D_X f . D_Y g) - Tr(D_Y f . D_X g).

    D_X f is the matrix with (D_X f)_{ji} = d f / d X_{ij}; this pairing of
    X_{ij} with Y_{ji} is the one induced by Tr(dX ^ dY).
    """
    ev = evaluator or Evaluator(pair)
    fx, fy = _gradient(ev, f)
    gx, gy = _gradient(ev, g)
    return trace(fx.dot(gy)) - trace(fy.dot(gx))


# -- identity verification --------------------------------------------------

@dataclass
class VerifyResult:
    passed: bool
    trials: int
    witness: MatrixPair = None
    value: mpq = None
    failures: list = field(default_factory=list)

    def summary(self):
        if self.passed:
            return f"pass ({self.trials} trials)"
        return f"fail: value {self.value} at\n{self.witness.describe()}"


def _trial(args):
    expr, kind, n, cfg, trial = args
    pair = sample(kind, n, cfg, trial)
    return trial, evaluate(expr, pair)


def verify_identity(expr, n, sampler=GENERIC_SAMPLER, trials=20, cfg=SamplerConfig(), jobs=1):
    """Evaluate ``expr`` (meant to be zero) on ``trials`` sampled pairs.

    Per-trial seeds derive from ``cfg.seed`` so ``jobs`` never changes the verdict.
    """
    tasks = [(expr, sampler, n, cfg, t) for t in range(trials)]
    if jobs > 1 and trials > 1 and not callable(expr):
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = sorted(pool.map(_trial, tasks))
    else:
        results = [_trial(t) for t in tasks]
    bad = [(t, v) for t, v in results if v != 0]
    if bad:
        t, v = bad[0]
        return VerifyResult(False, trials, sample(sampler, n, cfg, t), v, [t for t, _ in bad])
    return VerifyResult(True, trials)


def verify_many(exprs, n, sampler=GENERIC_SAMPLER, trials=20, cfg=SamplerConfig()):
    """One evaluator per sample shared across many expressions; returns failing indices."""
    failing = {}
    for t in range(trials):
        pair = sample(sampler, n, cfg, t)
        ev = Evaluator(pair)
        for k, e in enumerate(exprs):
            if k in failing:
                continue
            if evaluate(e, pair, ev) != 0:
                failing[k] = pair
    return failing

