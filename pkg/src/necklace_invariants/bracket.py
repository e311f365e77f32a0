"""Kontsevich bracket on necklaces and its Poisson extension to trace polynomials.

Sign convention: omega(A, B) = 1 = -omega(B, A), so {Tr X, Tr Y} = n.
"""

import os
import pickle
import threading
from itertools import product

from gmpy2 import mpq

from .necklace import canonicalize
from .tracepoly import GENERIC, SCALARS, TRACELESS, NecklaceSum, TracePolynomial

_OMEGA = {("A", "B"): 1, ("B", "A"): -1}


def _as_sum(x):
    if isinstance(x, NecklaceSum):
        return x
    return NecklaceSum.single(x)


def _word_bracket(w1, w2):
    out = {}
    for i, ui in enumerate(w1):
        rest1 = w1[i + 1:] + w1[:i]
        for j, vj in enumerate(w2):
            sign = _OMEGA.get((ui, vj))
            if sign is None:
                continue
            v = canonicalize(rest1 + w2[j + 1:] + w2[:j])
            out[v] = out.get(v, 0) + sign
    return out


def kontsevich_bracket(x1, x2):
    """Necklace bracket, bilinear in words or NecklaceSums."""
    s1, s2 = _as_sum(x1), _as_sum(x2)
    out = NecklaceSum()
    for w1, c1 in s1.terms.items():
        for w2, c2 in s2.terms.items():
            for v, k in _word_bracket(w1, w2).items():
                out.add_term(v, c1 * c2 * k)
    return out


def traceless_bracket_terms(w1, w2, n):
    """Raw traceless bracket of two words.

    Returns ``(linear, products)``: ``linear`` maps necklaces (same bidegree as
    the bracket) to coefficients, ``products`` maps sorted pairs of
    lower-degree necklaces to coefficients.  Traceless simplifications are
    *not* applied here; callers go through :class:`TracePolynomial`.
    """
    linear = {}
    products = {}
    inv_n = mpq(1, n)
    for i, ui in enumerate(w1):
        rest1 = w1[i + 1:] + w1[:i]
        for j, vj in enumerate(w2):
            sign = _OMEGA.get((ui, vj))
            if sign is None:
                continue
            rest2 = w2[j + 1:] + w2[:j]
            v = canonicalize(rest1 + rest2)
            linear[v] = linear.get(v, 0) + sign
            key = tuple(sorted((canonicalize(rest1), canonicalize(rest2))))
            products[key] = products.get(key, 0) - sign * inv_n
    return linear, products


def traceless_bracket(x1, x2, n):
    """Bracket of traces of words in traceless letters A, B.

    Each opposite-letter position pair contributes
    omega * [Tr(R1 R2) - Tr(R1) Tr(R2) / n], where R1, R2 are the cyclic
    remainders after deleting the paired letters.
    """
    s1, s2 = _as_sum(x1), _as_sum(x2)
    out = TracePolynomial(TRACELESS, n)
    for w1, c1 in s1.terms.items():
        for w2, c2 in s2.terms.items():
            linear, products = traceless_bracket_terms(w1, w2, n)
            c = c1 * c2
            for v, k in linear.items():
                out._add_raw((v,), c * k)
            for pair, k in products.items():
                out._add_raw(pair, c * k)
    return out


class BracketCache:
    """Memo of word-level brackets keyed by (canonical pair, mode, n).

    Only the ordered pair is stored; the reversed pair is answered by
    negation.  ``get_or_compute`` is atomic under a lock.
    """

    def __init__(self):
        self._data = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get_or_compute(self, v1, v2, mode, n):
        v1, v2 = canonicalize(v1), canonicalize(v2)
        flip = (v1, v2) > (v2, v1)
        key = (v2, v1, mode, n) if flip else (v1, v2, mode, n)
        with self._lock:
            value = self._data.get(key)
            if value is None:
                self.misses += 1
                a, b = key[0], key[1]
                if mode == GENERIC:
                    value = TracePolynomial.from_necklace_sum(GENERIC, n, kontsevich_bracket(a, b))
                else:
                    value = traceless_bracket(a, b, n)
                self._data[key] = value
            else:
                self.hits += 1
        return -value if flip else value

    def clear(self):
        with self._lock:
            self._data.clear()

    def stats(self):
        return {"hits": self.hits, "misses": self.misses, "entries": len(self._data)}

    def save(self, path):
        with self._lock:
            payload = {
                k: (v.interpretation, v.n, {m: str(c) for m, c in v.terms.items()})
                for k, v in self._data.items()
            }
        tmp = f"{path}.tmp"
        with open(tmp, "wb") as fh:
            pickle.dump(payload, fh)
        os.replace(tmp, path)

    def load(self, path):
        if not os.path.exists(path):
            return
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
        with self._lock:
            for k, (interp, n, terms) in payload.items():
                self._data.setdefault(k, TracePolynomial(interp, n, {m: mpq(c) for m, c in terms.items()}))


DEFAULT_CACHE = BracketCache()


def memoized_bracket(v1, v2, mode, n, cache=None):
    return (cache or DEFAULT_CACHE).get_or_compute(v1, v2, mode, n)


def _variable_bracket(u, v, interpretation, n, cache):
    if u in SCALARS or v in SCALARS:
        if u in SCALARS and v in SCALARS:
            if u == v:
                return TracePolynomial(interpretation, n)
            return TracePolynomial.constant(interpretation, n, n if u == "a1" else -n)
        return TracePolynomial(interpretation, n)
    return memoized_bracket(u, v, interpretation, n, cache)


def poisson_bracket(f, g, cache=None):
    """Leibniz extension of the necklace bracket to trace polynomials."""
    f._check(g)
    interp, n = f.interpretation, f.n
    out = TracePolynomial(interp, n)
    for m1, c1 in f.terms.items():
        for i, u in enumerate(m1):
            if i and m1[i - 1] == u:
                continue
            mult_u = m1.count(u)
            rest1 = m1[:i] + m1[i + 1:]
            for m2, c2 in g.terms.items():
                for j, v in enumerate(m2):
                    if j and m2[j - 1] == v:
                        continue
                    mult_v = m2.count(v)
                    rest2 = m2[:j] + m2[j + 1:]
                    br = _variable_bracket(u, v, interp, n, cache)
                    if not br:
                        continue
                    coeff = c1 * c2 * mult_u * mult_v
                    rest = tuple(sorted(rest1 + rest2))
                    for m3, c3 in br.terms.items():
                        out._add(tuple(sorted(rest + m3)), coeff * c3)
    return out


def _substitute_letters(word, first, second, n, target):
    """Expand Tr(word) after letter -> letter' + scalar, in ``target`` interpretation.

    ``first``/``second`` give ``(coefficient, scalar_variable)`` for A/B.
    """
    out = TracePolynomial(target, n)
    positions = range(len(word))
    subs = {"A": first, "B": second}
    for choice in product((False, True), repeat=len(word)):
        coeff = mpq(1)
        scalars = []
        kept = []
        for p in positions:
            letter = word[p]
            if choice[p]:
                c, var = subs[letter]
                coeff *= c
                scalars.append(var)
            else:
                kept.append(letter)
        out._add_raw(tuple(scalars) + ("".join(kept),), coeff)
    return out


def expand_traceless(x, n):
    """Rewrite traceless traces in generic ones: A = X - Tr(X)/n, B = Y - Tr(Y)/n.

    Accepts a word or a traceless TracePolynomial (without scalar variables).
    """
    if isinstance(x, str):
        return _substitute_letters(x, (mpq(-1, n), "A"), (mpq(-1, n), "B"), n, GENERIC)
    if x.interpretation != TRACELESS:
        raise ValueError("expand_traceless expects a traceless polynomial")
    out = TracePolynomial(GENERIC, n)
    cache = {}
    for mono, c in x.terms.items():
        term = TracePolynomial.constant(GENERIC, n, c)
        for var in mono:
            if var in SCALARS:
                term = term * TracePolynomial.trace(GENERIC, n, "A" if var == "a1" else "B")
                continue
            if var not in cache:
                cache[var] = expand_traceless(var, n)
            term = term * cache[var]
        out = out + term
    return out


def contract_to_traceless(x, n):
    """Rewrite generic traces in traceless ones: X = A + a1/n, Y = B + a2/n."""
    if isinstance(x, str):
        return _substitute_letters(x, (mpq(1, n), "a1"), (mpq(1, n), "a2"), n, TRACELESS)
    if x.interpretation != GENERIC:
        raise ValueError("contract_to_traceless expects a generic polynomial")
    out = TracePolynomial(TRACELESS, n)
    cache = {}
    for mono, c in x.terms.items():
        term = TracePolynomial.constant(TRACELESS, n, c)
        for var in mono:
            if var not in cache:
                cache[var] = contract_to_traceless(var, n)
            term = term * cache[var]
        out = out + term
    return out


def bracket_via_generic(w1, w2, n):
    """Traceless bracket computed by expanding, bracketing generically, contracting."""
    f = expand_traceless(w1, n)
    g = expand_traceless(w2, n)
    return contract_to_traceless(poisson_bracket(f, g, cache=BracketCache()), n)
