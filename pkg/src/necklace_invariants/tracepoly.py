"""Formal sums of necklaces and commutative polynomials in their traces."""

from gmpy2 import mpq

from .necklace import GENERIC_ALPHABET, TRACELESS_ALPHABET, canonicalize, deglex_key, render

GENERIC = "generic"
TRACELESS = "traceless"
SCALARS = ("a1", "a2")

Q = mpq


def to_q(x):
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


class NecklaceSum:
    """Finite rational combination of necklaces (zero coefficients never stored)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for v, c in terms.items():
                c = to_q(c)
                if c:
                    key = canonicalize(v)
                    total = self.terms.get(key, 0) + c
                    if total:
                        self.terms[key] = total
                    else:
                        self.terms.pop(key, None)

    @classmethod
    def single(cls, word, coeff=1):
        return cls({word: coeff})

    def add_term(self, necklace, coeff):
        total = self.terms.get(necklace, 0) + coeff
        if total:
            self.terms[necklace] = total
        else:
            self.terms.pop(necklace, None)

    def __add__(self, other):
        out = NecklaceSum()
        out.terms = dict(self.terms)
        for v, c in other.terms.items():
            out.add_term(v, c)
        return out

    def __neg__(self):
        out = NecklaceSum()
        out.terms = {v: -c for v, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = to_q(c)
        out = NecklaceSum()
        if c:
            out.terms = {v: c * x for v, x in self.terms.items()}
        return out

    def __eq__(self, other):
        if isinstance(other, NecklaceSum):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def bidegrees(self):
        return {(v.count("A"), v.count("B")) for v in self.terms}

    def __repr__(self):
        return f"NecklaceSum({format_necklace_sum(self)})"


def format_necklace_sum(s, alphabet=TRACELESS_ALPHABET):
    items = sorted(s.terms.items(), key=lambda kv: deglex_key(kv[0]), reverse=True)
    return _join_terms((c, f"T({render(v, alphabet)})") for v, c in items)


def _format_coeff_term(c, body):
    if body is None:
        return str(c)
    if c == 1:
        return body
    return f"{c}*{body}"


def _join_terms(pairs):
    out = []
    for c, body in pairs:
        text = _format_coeff_term(abs(c), body)
        if not out:
            out.append(text if c > 0 else f"-{text}")
        else:
            out.append(f"+ {text}" if c > 0 else f"- {text}")
    return " ".join(out) if out else "0"


def _var_key(var):
    if var in SCALARS:
        return (0, var)
    return (1,) + deglex_key(var)


class TracePolynomial:
    """Commutative polynomial whose variables are traces of necklaces.

    A monomial is a sorted tuple of variable names: canonical necklace words,
    plus the central scalars ``a1 = Tr X`` and ``a2 = Tr Y`` in the traceless
    interpretation.  ``Tr(1) = n`` is applied eagerly, and in the traceless
    interpretation so are ``Tr A = Tr B = 0``.
    """

    __slots__ = ("interpretation", "n", "terms")

    def __init__(self, interpretation, n, terms=None):
        if interpretation not in (GENERIC, TRACELESS):
            raise ValueError(f"unknown interpretation {interpretation!r}")
        self.interpretation = interpretation
        self.n = n
        self.terms = {}
        if terms:
            for mono, c in terms.items():
                self._add_raw(mono, to_q(c))

    def _add_raw(self, mono, c):
        if not c:
            return
        factor = 1
        kept = []
        for var in mono:
            if var == "":
                factor *= self.n
            elif self.interpretation == TRACELESS and var in ("A", "B"):
                return
            else:
                kept.append(var if var in SCALARS else canonicalize(var))
        self._add(tuple(sorted(kept)), c * factor)

    def _add(self, mono, c):
        total = self.terms.get(mono, 0) + c
        if total:
            self.terms[mono] = total
        else:
            self.terms.pop(mono, None)

    def _like(self):
        return TracePolynomial(self.interpretation, self.n)

    @classmethod
    def constant(cls, interpretation, n, c):
        return cls(interpretation, n, {(): c})

    @classmethod
    def trace(cls, interpretation, n, word, coeff=1):
        return cls(interpretation, n, {(word,): coeff})

    @classmethod
    def scalar(cls, n, name):
        return cls(TRACELESS, n, {(name,): 1})

    @classmethod
    def from_necklace_sum(cls, interpretation, n, s):
        out = cls(interpretation, n)
        for v, c in s.terms.items():
            out._add_raw((v,), c)
        return out

    def _check(self, other):
        if (self.interpretation, self.n) != (other.interpretation, other.n):
            raise ValueError(
                "mismatched trace polynomials: "
                f"{self.interpretation}/n={self.n} vs {other.interpretation}/n={other.n}"
            )

    def _coerce(self, other):
        if isinstance(other, TracePolynomial):
            self._check(other)
            return other
        return TracePolynomial.constant(self.interpretation, self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = self._like()
        out.terms = dict(self.terms)
        for m, c in other.terms.items():
            out._add(m, c)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = self._like()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TracePolynomial):
            c = to_q(other)
            out = self._like()
            if c:
                out.terms = {m: c * x for m, x in self.terms.items()}
            return out
        self._check(other)
        out = self._like()
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out._add(tuple(sorted(m1 + m2)), c1 * c2)
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, TracePolynomial):
            return (
                self.interpretation == other.interpretation
                and self.n == other.n
                and self.terms == other.terms
            )
        try:
            return self.terms == TracePolynomial.constant(self.interpretation, self.n, other).terms
        except TypeError:
            return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def variables(self):
        return sorted({v for m in self.terms for v in m}, key=_var_key)

    def degree_of(self, mono):
        return sum(1 if v in SCALARS else len(v) for v in mono)

    def __repr__(self):
        return f"TracePolynomial({self.interpretation}, n={self.n}: {self.format()})"

    def format(self):
        alphabet = GENERIC_ALPHABET if self.interpretation == GENERIC else TRACELESS_ALPHABET

        def body(mono):
            if not mono:
                return None
            ordered = sorted(mono, key=_var_key, reverse=True)
            return "*".join(v if v in SCALARS else f"T({render(v, alphabet)})" for v in ordered)

        def key(item):
            mono = item[0]
            return (self.degree_of(mono), sorted((_var_key(v) for v in mono), reverse=True))

        items = sorted(self.terms.items(), key=key, reverse=True)
        return _join_terms((c, body(m)) for m, c in items)
