"""Sparse polynomials over Q in the abstract generators a_1, a_2, ...

Monomials are packed into a single Python int, ``SHIFT`` bits per variable,
so monomial multiplication is integer addition.  Variable indices start at 1.
"""

from functools import lru_cache
from math import gcd

from gmpy2 import mpq

SHIFT = 6
MASK = (1 << SHIFT) - 1
MAX_VARS = 40

ONE = 0


def var_mono(i):
    return 1 << (SHIFT * (i - 1))


@lru_cache(maxsize=1 << 18)
def mono_exponents(m):
    """Tuple of ``(index, exponent)`` pairs in ascending index."""
    out = []
    i = 1
    while m:
        e = m & MASK
        if e:
            out.append((i, e))
        m >>= SHIFT
        i += 1
    return tuple(out)


def mono_from_exponents(pairs):
    m = 0
    for i, e in pairs:
        if e >= MASK:
            raise OverflowError("exponent too large for packed monomial")
        m += e << (SHIFT * (i - 1))
    return m


def mono_exponent(m, i):
    return (m >> (SHIFT * (i - 1))) & MASK


def mono_divides(a, b):
    if a > b:
        return False
    for i, e in mono_exponents(a):
        if mono_exponent(b, i) < e:
            return False
    return True


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms:
            self.terms = {m: mpq(c) for m, c in terms.items() if c}
        else:
            self.terms = {}

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c):
        return cls({ONE: c})

    @classmethod
    def var(cls, i, coeff=1):
        return cls({var_mono(i): coeff})

    @classmethod
    def monomial(cls, mono, coeff=1):
        return cls({mono: coeff})

    def copy(self):
        return Poly._raw(dict(self.terms))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            return self.terms == ({ONE: mpq(other)} if other else {})
        return NotImplemented

    __hash__ = None

    def iadd(self, other, coeff=1):
        """In-place ``self += coeff * other``."""
        t = self.terms
        if coeff == 1:
            for m, c in other.terms.items():
                s = t.get(m)
                if s is None:
                    t[m] = c
                else:
                    s += c
                    if s:
                        t[m] = s
                    else:
                        del t[m]
        elif coeff:
            for m, c in other.terms.items():
                s = t.get(m, 0) + coeff * c
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return self

    def iadd_mul(self, a, b, coeff=1):
        """In-place ``self += coeff * a * b``."""
        t = self.terms
        for m1, c1 in a.terms.items():
            k = c1 * coeff
            for m2, c2 in b.terms.items():
                m = m1 + m2
                s = t.get(m, 0) + k * c2
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return self

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(other)

    def __add__(self, other):
        return self.copy().iadd(self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.copy().iadd(self._coerce(other), -1)

    def __rsub__(self, other):
        return self._coerce(other).copy().iadd(self, -1)

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def scale(self, c):
        c = mpq(c)
        if not c:
            return Poly()
        return Poly._raw({m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if len(self.terms) < len(other.terms):
            small, big = self, other
        else:
            small, big = other, self
        return Poly().iadd_mul(big, small)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(1 / mpq(c))

    def __pow__(self, k):
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def derivative(self, i):
        shift = SHIFT * (i - 1)
        step = 1 << shift
        out = {}
        for m, c in self.terms.items():
            e = (m >> shift) & MASK
            if e:
                out[m - step] = c * e
        return Poly._raw(out)

    def variables(self):
        seen = set()
        for m in self.terms:
            for i, _ in mono_exponents(m):
                seen.add(i)
        return sorted(seen)

    def constant_term(self):
        return self.terms.get(ONE, mpq(0))

    def substitute(self, images):
        """Algebra homomorphism a_i -> images[i] (missing indices stay fixed)."""
        out = Poly()
        powers = {}
        for m, c in self.terms.items():
            term = Poly.const(c)
            for i, e in mono_exponents(m):
                img = images.get(i)
                if img is None:
                    img = Poly.var(i)
                key = (i, e)
                if key not in powers:
                    powers[key] = img ** e
                term = term * powers[key]
                if not term:
                    break
            out.iadd(term)
        return out

    def evaluate(self, values):
        """Evaluate with ``values[i]`` for each variable index."""
        total = mpq(0)
        cache = {}
        for m, c in self.terms.items():
            v = cache.get(m)
            if v is None:
                v = mpq(1)
                for i, e in mono_exponents(m):
                    v *= values[i] ** e
                cache[m] = v
            total += c * v
        return total

    def primitive(self):
        """Integer-coefficient primitive multiple (sign untouched)."""
        if not self.terms:
            return Poly()
        den = 1
        for c in self.terms.values():
            d = int(c.denominator)
            den = den * d // gcd(den, d)
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for x in nums:
            g = gcd(g, x)
        scale = mpq(den, g)
        return Poly._raw({m: c * scale for m, c in self.terms.items()})

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def mono_text(m):
    return "*".join(f"a{i}^{e}" if e > 1 else f"a{i}" for i, e in mono_exponents(m))


def format_poly(p, key=None):
    """Render as ``1/12*a5*a6 + 1/2*a4*a7 - a16``; ``key`` sorts terms descending."""
    if not p.terms:
        return "0"
    items = list(p.terms.items())
    if key is not None:
        items.sort(key=lambda kv: key(kv[0]), reverse=True)
    else:
        items.sort(reverse=True)
    out = []
    for m, c in items:
        a = abs(c)
        if m == ONE:
            body = str(a)
        elif a == 1:
            body = mono_text(m)
        else:
            body = f"{a}*{mono_text(m)}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(("+ " if c > 0 else "- ") + body)
    return " ".join(out)


class PolySyntaxError(ValueError):
    pass


def parse_poly(text):
    """Inverse of :func:`format_poly` (also tolerant of extra whitespace)."""
    s = "".join(text.split())
    if s in ("", "0"):
        return Poly()
    if s[0] not in "+-":
        s = "+" + s
    out = Poly()
    i = 0
    while i < len(s):
        sign = 1 if s[i] == "+" else -1
        j = i + 1
        while j < len(s) and s[j] not in "+-":
            j += 1
        chunk = s[i + 1:j]
        if not chunk:
            raise PolySyntaxError(f"empty term in {text!r}")
        coeff = mpq(sign)
        mono = ONE
        for factor in chunk.split("*"):
            if not factor:
                raise PolySyntaxError(f"bad term {chunk!r}")
            if factor[0] == "a":
                name, _, exp = factor.partition("^")
                try:
                    idx = int(name[1:])
                    e = int(exp) if exp else 1
                except ValueError as err:
                    raise PolySyntaxError(f"bad factor {factor!r}") from err
                if idx < 1 or idx > MAX_VARS or e < 1:
                    raise PolySyntaxError(f"bad factor {factor!r}")
                mono += e * var_mono(idx)
            else:
                try:
                    coeff *= mpq(factor)
                except ValueError as err:
                    raise PolySyntaxError(f"bad coefficient {factor!r}") from err
        out.iadd(Poly.monomial(mono, coeff))
        i = j
    return out
