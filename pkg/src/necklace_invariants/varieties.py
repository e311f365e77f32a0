"""Substitution maps onto the invariant commuting variety and Calogero-Moser rings.

A map sends each generator to a polynomial in the commutator-free
generators (possibly a constant).  Printed scalar images are treated as
claims: :func:`verify_map` evaluates every generator on sampled points of
the target variety and records the value actually taken.
"""

from dataclasses import dataclass, field

from gmpy2 import mpq

from .generators import ring_for
from .miner import dump_relations
from .oracle import CM_SAMPLER, COMMUTING_SAMPLER, GENERIC_SAMPLER, Evaluator, SamplerConfig, sample
from .polynomial import Poly, parse_poly

COM = "com"
CM = "cm"

# n = 4 Calogero-Moser images as printed: scalars, then multiples of a_j
CM4_PRINTED_SCALARS = {15: mpq(6), 21: mpq(24), 27: mpq(42), 32: mpq(168)}
CM4_PRINTED_MULTIPLES = {
    18: (3, 3), 19: (6, 4), 20: (3, 5),
    24: (6, 3), 25: (6, 4), 26: (6, 5),
    28: (6, 6), 29: (6, 7), 30: (6, 8), 31: (6, 9),
}
CM3_PRINTED_SCALARS = {10: mpq(-3), 11: mpq(2)}


@dataclass
class SubstitutionMap:
    n: int
    target: str
    images: dict  # generator index -> Poly
    printed: dict = field(default_factory=dict)  # index -> printed scalar claim
    resolved: bool = False

    @property
    def name(self):
        return f"{self.target}{self.n}"

    def image(self, i):
        return self.images.get(i, Poly.var(i))

    def with_scalars(self, values):
        images = dict(self.images)
        for i, v in values.items():
            images[i] = Poly.const(v)
        return SubstitutionMap(self.n, self.target, images, dict(self.printed), resolved=True)


def _check_n(n):
    if n not in (2, 3, 4):
        raise ValueError(f"substitution maps exist for n in (2, 3, 4), got {n}")


def _commutator_free(ring, i):
    g = ring.by_index[i]
    return g.scalar or g.index <= (14 if ring.n == 4 else 9)


def com_map(n):
    """Identity on commutator-free generators, zero on the rest."""
    _check_n(n)
    ring = ring_for(n)
    images = {i: (Poly.var(i) if _commutator_free(ring, i) else Poly()) for i in ring.indices}
    return SubstitutionMap(n, COM, images)


def cm_map(n):
    """The printed Calogero-Moser images; scalar images are unresolved claims."""
    _check_n(n)
    ring = ring_for(n)
    images = {i: (Poly.var(i) if _commutator_free(ring, i) else Poly()) for i in ring.indices}
    printed = {}
    if n == 4:
        printed = dict(CM4_PRINTED_SCALARS)
        for i, (c, j) in CM4_PRINTED_MULTIPLES.items():
            images[i] = Poly.var(j, c)
    elif n == 3:
        printed = dict(CM3_PRINTED_SCALARS)
    for i, v in printed.items():
        images[i] = Poly.const(v)
    return SubstitutionMap(n, CM, images, printed)


def apply(smap, p):
    return p.substitute(smap.images)


def image_relations(relations, smap):
    """Images of ``[(bidegree, Poly)]``; zero images dropped, duplicates removed."""
    ring = ring_for(smap.n)
    seen = set()
    out = []
    for b, rho in relations:
        img = apply(smap, rho)
        if not img:
            continue
        img = ring.canonical(img)
        key = tuple(sorted(img.terms.items()))
        if key in seen:
            continue
        seen.add(key)
        out.append((b, img))
    return out


def dump_image_relations(images, smap, max_degree, seed):
    return dump_relations(images, smap.n, max_degree, seed, extra=f"target={smap.name}")


@dataclass
class GeneratorCheck:
    index: int
    image: Poly
    passed: bool
    values: list  # generator value per trial
    witness: int = None  # first failing trial


@dataclass
class ScalarResolution:
    index: int
    printed: mpq
    resolved: mpq  # None when the value is not constant across samples

    @property
    def conflict(self):
        return self.resolved != self.printed

    def line(self, ring):
        name = ring.by_index[self.index].name
        if self.resolved is None:
            return f"{name}: printed {self.printed}, not constant on samples"
        tag = "CONFLICT" if self.conflict else "ok"
        return f"{name}: printed {self.printed}, observed {self.resolved} [{tag}]"


@dataclass
class MapReport:
    smap: SubstitutionMap
    checks: list
    scalars: list

    @property
    def passed(self):
        """Every non-scalar image holds and every scalar image is constant."""
        scalar_idx = {s.index for s in self.scalars}
        return all(c.passed for c in self.checks if c.index not in scalar_idx) and all(
            s.resolved is not None for s in self.scalars
        )

    @property
    def conflicts(self):
        return [s for s in self.scalars if s.conflict]

    def resolved_map(self):
        if not all(s.resolved is not None for s in self.scalars):
            raise ValueError("scalar images could not be resolved")
        return self.smap.with_scalars({s.index: s.resolved for s in self.scalars})

    def lines(self):
        ring = ring_for(self.smap.n)
        out = [f"# map-report v1 target={self.smap.name}"]
        for c in self.checks:
            status = "pass" if c.passed else f"fail (trial {c.witness}, value {c.values[c.witness]})"
            out.append(f"{ring.by_index[c.index].name} -> {ring.format(c.image)}: {status}")
        out += [s.line(ring) for s in self.scalars]
        return out


def verify_map(smap, trials=10, cfg=SamplerConfig()):
    """Compare every generator with its image on points of the target variety."""
    n = smap.n
    ring = ring_for(n)
    kind = COMMUTING_SAMPLER if smap.target == COM else CM_SAMPLER
    evals = [Evaluator(sample(kind, n, cfg, t)) for t in range(trials)]
    checks = []
    for i in ring.indices:
        img = smap.image(i)
        values = [ev.generators()[i] for ev in evals]
        bad = [t for t, ev in enumerate(evals) if values[t] != ev.genpoly(img)]
        checks.append(GeneratorCheck(i, img, not bad, values, bad[0] if bad else None))
    scalars = []
    for i, printed in sorted(smap.printed.items()):
        vals = {ev.generators()[i] for ev in evals}
        scalars.append(ScalarResolution(i, printed, vals.pop() if len(vals) == 1 else None))
    return MapReport(smap, checks, scalars)


def verify_images(images, smap, trials=10, cfg=SamplerConfig()):
    """Indices of image relations that fail to vanish on the target variety."""
    kind = COMMUTING_SAMPLER if smap.target == COM else CM_SAMPLER
    failing = []
    evals = [Evaluator(sample(kind, smap.n, cfg, t)) for t in range(trials)]
    for k, (_, p) in enumerate(images):
        if any(ev.genpoly(p) != 0 for ev in evals):
            failing.append(k)
    return failing


# -- the n = 3 rewritten identity ---------------------------------------------

R1 = "a3*a9 - 2*a4*a8 + a5*a7"
R2 = "a5*a6 - 2*a4*a7 + a3*a8"
R3_BODY = "-a3*a4^2 + a3^2*a5 + 6*a6*a8 - 6*a7^2"
R4_BODY = "-a4^3 + a3*a4*a5 + 3*a6*a9 - 3*a7*a8"
R5_BODY = "-a4^2*a5 + a3*a5^2 + 6*a7*a9 - 6*a8^2"


def cm3_relations(delta):
    """r1..r5; ``delta`` is a number or a Poly (the 9*delta slot)."""
    d = delta if isinstance(delta, Poly) else Poly.const(delta)
    r = [parse_poly(R1), parse_poly(R2)]
    for lead, body in ((3, R3_BODY), (4, R4_BODY), (5, R5_BODY)):
        r.append(d * Poly.var(lead, 9) + parse_poly(body))
    return r


def n3_identity(delta=1, a15=None, a21=None):
    """The rewritten C_32 relation in terms of r1..r5.

    ``a15``/``a21`` default to the n = 3 generators g10/g11.
    """
    a15 = Poly.var(10) if a15 is None else a15
    a21 = Poly.var(11) if a21 is None else a21
    r1, r2, r3, r4, r5 = cm3_relations(delta)
    a3, a4, a5 = Poly.var(3), Poly.var(4), Poly.var(5)
    out = a21 * a21 + (a15 ** 3) * mpq(4, 27)
    out = out - (r3 * r5 - r4 * r4) * mpq(1, 27)
    out = out - (a3 * r1 * r1 - a4 * r1 * r2 * 2 + a5 * r2 * r2) * mpq(1, 18)
    return out


def proportionality(p, q, ring):
    """Scalar s with p = s*q, or None."""
    if not p or not q:
        return None
    lead = ring.leading_monomial(q)
    c = p.terms.get(lead)
    if c is None:
        return None
    s = c / q.terms[lead]
    return s if p == q.scale(s) else None


@dataclass
class IdentityVariant:
    label: str
    poly: Poly
    scalar: mpq  # identity = scalar * mined relation, or None
    generic_zero: list  # per-trial exact vanishing on generic pairs
    cm_zero: list

    def line(self):
        prop = f"proportional (factor {self.scalar})" if self.scalar is not None else "not proportional"
        g = "vanishes" if all(self.generic_zero) else f"nonzero on {self.generic_zero.count(False)}"
        c = "vanishes" if all(self.cm_zero) else f"nonzero on {self.cm_zero.count(False)}"
        return f"{self.label}: {prop}; generic pairs: {g}; cm points: {c}"


@dataclass
class N3IdentityReport:
    relation: Poly
    variants: list

    def variant(self, label):
        return next(v for v in self.variants if v.label == label)

    @property
    def passed(self):
        """The identity as printed (delta = 1) matches the mined relation."""
        v = self.variant("delta=1")
        return v.scalar is not None and all(v.generic_zero)

    def lines(self):
        return [v.line() for v in self.variants]


def n3_identity_check(relation, trials=20, cfg=SamplerConfig()):
    """Compare variants of the rewritten identity with the mined n = 3 relation.

    Variants: delta = 1 and delta = 0 as printed, the same with a15 = -g10,
    and the homogenized form 9*delta = 3*g10 with a15 = -g10 (on CM points
    g10 = 3, so this restricts to delta = 1).
    """
    ring = ring_for(3)
    g10 = Poly.var(10)
    candidates = [
        ("delta=1", n3_identity(1)),
        ("delta=0", n3_identity(0)),
        ("delta=1,a15=-g10", n3_identity(1, a15=-g10)),
        ("delta=0,a15=-g10", n3_identity(0, a15=-g10)),
        ("9delta=3g10,a15=-g10", n3_identity(g10 * mpq(1, 3), a15=-g10)),
    ]
    gen = [Evaluator(sample(GENERIC_SAMPLER, 3, cfg, t)) for t in range(trials)]
    cm = [Evaluator(sample(CM_SAMPLER, 3, cfg, t)) for t in range(trials)]
    variants = []
    for label, p in candidates:
        variants.append(IdentityVariant(
            label, p, proportionality(p, relation, ring),
            [ev.genpoly(p) == 0 for ev in gen],
            [ev.genpoly(p) == 0 for ev in cm],
        ))
    return N3IdentityReport(relation, variants)
