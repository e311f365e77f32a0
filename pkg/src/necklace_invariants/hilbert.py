"""Exact single-graded Hilbert series bookkeeping.

Polynomials in t are integer lists (index = exponent).
"""

from dataclasses import dataclass
from fractions import Fraction


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def poly_prod(factors):
    out = [1]
    for f in factors:
        out = poly_mul(out, f)
    return out


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def one_minus(k):
    """1 - t^k."""
    return [1] + [0] * (k - 1) + [-1]


def one_plus(k):
    return [1] + [0] * (k - 1) + [1]


def from_terms(terms):
    """Polynomial from ``{exponent: coefficient}``."""
    out = [0] * (max(terms) + 1)
    for e, c in terms.items():
        out[e] += c
    return _trim(out)


@dataclass(frozen=True)
class RationalSeries:
    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        if not self.denominator or self.denominator[0] == 0:
            raise ValueError("denominator must not vanish at t = 0")

    @classmethod
    def of(cls, num, den):
        return cls(tuple(_trim(num)), tuple(_trim(den)))

    def coefficients(self, D):
        """First ``D + 1`` Taylor coefficients by exact long division."""
        num, den = self.numerator, self.denominator
        d0 = den[0]
        out = []
        for k in range(D + 1):
            acc = num[k] if k < len(num) else 0
            for i in range(1, min(k, len(den) - 1) + 1):
                acc -= den[i] * out[k - i]
            if d0 in (1, -1):
                out.append(acc * d0)
            else:
                q = Fraction(acc, d0)
                out.append(int(q) if q.denominator == 1 else q)
        return out

    def coefficient(self, d):
        return self.coefficients(d)[d]

    def times(self, poly):
        return RationalSeries.of(poly_mul(list(self.numerator), poly), list(self.denominator))

    def same_function(self, other):
        """Exact equality as rational functions (cross-multiplication)."""
        return poly_mul(list(self.numerator), list(other.denominator)) == poly_mul(
            list(other.numerator), list(self.denominator)
        )


def coefficients(series, D):
    return series.coefficients(D)


C42_NUMERATOR = poly_mul(
    from_terms({0: 1, 2: -1, 4: 1}),
    from_terms({0: 1, 1: -1, 3: -1, 4: 1, 5: 2, 6: 1, 7: -1, 9: -1, 10: 1}),
)
C42_DENOMINATOR = poly_prod([one_minus(1)] * 3 + [one_minus(2)] * 4 + [one_minus(3)] * 5 + [one_minus(4)] * 5)

RESCALE_FACTOR = poly_prod([one_plus(2), [1, 1, 1], one_plus(3), one_plus(3)])
RESCALED_DENOMINATOR = poly_prod(
    [one_minus(1)] * 2 + [one_minus(2)] * 3 + [one_minus(3)] * 4 + [one_minus(4)] * 6 + [one_minus(6)] * 2
)
PRINTED_RESCALED_NUMERATOR = from_terms({
    0: 1, 5: 2, 6: 2, 7: 2, 8: 4, 9: 4, 10: 4, 11: 4, 12: 2, 13: 4,
    14: 4, 15: 4, 16: 4, 17: 2, 18: 2, 19: 2, 24: 1,
})


def c42_series():
    return RationalSeries.of(C42_NUMERATOR, C42_DENOMINATOR)


def c32_series():
    """C_32 from its Hironaka decomposition: secondaries 1 and t^6."""
    den = poly_prod([one_minus(1)] * 2 + [one_minus(2)] * 3 + [one_minus(3)] * 4 + [one_minus(4)])
    return RationalSeries.of(one_plus(6), den)


def c22_series():
    return free_ring_series([1, 1, 2, 2, 2])


def target_series(n):
    try:
        return {2: c22_series, 3: c32_series, 4: c42_series}[n]()
    except KeyError:
        raise ValueError(f"no Hilbert series for n={n}") from None


class RescaleMismatch(AssertionError):
    pass


def rescaled_numerator():
    """Numerator of the C_42 series over the rescaled denominator.

    Raises :class:`RescaleMismatch` unless the denominator identity holds and
    the numerator equals the printed secondary-degree polynomial.
    """
    if poly_mul(C42_DENOMINATOR, RESCALE_FACTOR) != RESCALED_DENOMINATOR:
        raise RescaleMismatch("rescaled denominator does not match")
    num = poly_mul(C42_NUMERATOR, RESCALE_FACTOR)
    if num != PRINTED_RESCALED_NUMERATOR:
        raise RescaleMismatch(f"rescaled numerator {num} differs from the printed one")
    return num


def free_ring_series(degrees):
    return RationalSeries.of([1], poly_prod([one_minus(d) for d in degrees]))


def traceless_target(n):
    """Target series with the two degree-1 trace generators removed."""
    s = target_series(n)
    return s.times(poly_prod([one_minus(1)] * 2))


def free_traceless(n):
    from .generators import ring_for

    ring = ring_for(n)
    return free_ring_series([ring.deg[i] for i in ring.traceless_indices])


def relation_space_dims(n, D):
    """Expected dim I_d for d <= D: free traceless ring minus target."""
    free = free_traceless(n).coefficients(D)
    target = traceless_target(n).coefficients(D)
    return [f - t for f, t in zip(free, target)]


def deficit(n, d, ideal_dim=0):
    return relation_space_dims(n, d)[d] - ideal_dim


@dataclass
class AccountingResult:
    match: bool
    primary_count: int
    expected_primary_count: int
    secondary_count: int
    first_mismatch: tuple = None  # (degree, expected, obtained)

    def verdict(self):
        if self.match:
            return "match"
        d, want, got = self.first_mismatch
        return f"mismatch at t^{d}: expected {want}, got {got}"


def hironaka_accounting(primary_degrees, secondary_degrees, target=None, d=2, n=4, D=60):
    """Compare sum t^deg(q) / prod(1 - t^deg(p)) against ``target``."""
    target = target or c42_series()
    num = [0] * (max(secondary_degrees) + 1)
    for q in secondary_degrees:
        num[q] += 1
    candidate = RationalSeries.of(num, poly_prod([one_minus(p) for p in primary_degrees]))
    same = candidate.same_function(target)
    mismatch = None
    if not same:
        a, b = target.coefficients(D), candidate.coefficients(D)
        for k, (x, y) in enumerate(zip(a, b)):
            if x != y:
                mismatch = (k, x, y)
                break
        else:
            mismatch = (D + 1, None, None)
    expected_k = (d - 1) * n * n + 1
    ok = same and len(primary_degrees) == expected_k
    if same and not ok:
        mismatch = (0, expected_k, len(primary_degrees))
    return AccountingResult(ok, len(primary_degrees), expected_k, len(secondary_degrees), mismatch)
