"""Batch command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 unfilled relation deficit.
"""

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bracket import DEFAULT_CACHE, bracket_via_generic, poisson_bracket, traceless_bracket
from .generators import GREVLEX, CUSTOM, UnsupportedSize, ring_for
from .hilbert import (
    c42_series,
    hironaka_accounting,
    relation_space_dims,
    target_series,
)
from .miner import MineConfig, load_relations, mine, dump_relations
from .necklace import WordSyntaxError, canonicalize, parse_word
from .oracle import SAMPLERS, Evaluator, SamplerConfig, evaluate, numeric_poisson, sample
from .polynomial import Poly, PolySyntaxError
from .reducer import ExpressionTable
from .tracepoly import GENERIC, TracePolynomial
from .varieties import (
    cm_map,
    com_map,
    dump_image_relations,
    image_relations,
    n3_identity_check,
    verify_images,
    verify_map,
)
from .generators import primary_degrees_n4, secondary_degrees_n4

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_DEFICIT = 3

CACHE_ENV = "NECKLACE_CACHE_DIR"
ORDERS = {"custom": CUSTOM, "grevlex": GREVLEX}


@dataclass
class RunConfig:
    command: str
    n: int = None
    max_degree: int = None
    seed: int = 0
    trials: int = None
    order: str = "custom"
    outputs: dict = field(default_factory=dict)

    def header(self):
        parts = [f"command={self.command}"]
        for k in ("n", "max_degree", "seed", "trials", "order"):
            v = getattr(self, k)
            if v is not None:
                parts.append(f"{k}={v}")
        parts += [f"{k}={v}" for k, v in sorted(self.outputs.items()) if v]
        return "# run " + " ".join(parts)


class UsageError(Exception):
    pass


def _run_config(args):
    outputs = {k: getattr(args, k) for k in ("out", "table_out") if getattr(args, k, None)}
    return RunConfig(
        command=args.command,
        n=getattr(args, "n", None),
        max_degree=getattr(args, "max_degree", None),
        seed=getattr(args, "seed", 0),
        trials=getattr(args, "trials", None),
        order=getattr(args, "order", "custom"),
        outputs=outputs,
    )


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _check_n(n, allowed=(2, 3, 4)):
    if n not in allowed:
        raise UsageError(f"--n must be one of {allowed}, got {n}")


def _mine(args, rc):
    _check_n(args.n)
    cfg = MineConfig(n=args.n, max_degree=args.max_degree, seed=args.seed,
                     special=not getattr(args, "no_special", False), order=ORDERS[args.order])
    result = mine(args.n, args.max_degree, cfg)
    for line in result.log:
        print(line, file=sys.stderr)
    return result


def _unfilled(result):
    if result.unfilled:
        for d, k in sorted(result.unfilled.items()):
            print(f"unfilled deficit at degree {d}: {k} relation(s) missing", file=sys.stderr)
        return True
    return False


def cmd_table(args, rc):
    result = _mine(args, rc)
    text = result.table.dumps(max_degree=args.max_degree, order=ORDERS[args.order],
                              extra_header=f" max_degree={args.max_degree}\n{rc.header()}")
    _write(args.out, text)
    return EXIT_DEFICIT if _unfilled(result) else EXIT_OK


def cmd_mine(args, rc):
    result = _mine(args, rc)
    text = dump_relations(result.ideal.relations, args.n, args.max_degree, args.seed,
                          order=ORDERS[args.order])
    _write(args.out, text.replace("\n", f"\n{rc.header()}\n", 1))
    if args.table_out:
        result.table.save(args.table_out, max_degree=args.max_degree, order=ORDERS[args.order],
                          extra_header=f" max_degree={args.max_degree}\n{rc.header()}")
    for rep in result.reports:
        print(rep.line(), file=sys.stderr)
    print(f"{len(result.ideal.relations)} relation(s) through degree {args.max_degree}", file=sys.stderr)
    return EXIT_DEFICIT if _unfilled(result) else EXIT_OK


def _load_cache():
    root = os.environ.get(CACHE_ENV)
    if root:
        DEFAULT_CACHE.load(os.path.join(root, "brackets.pkl"))
    return root


def _save_cache(root):
    if root:
        os.makedirs(root, exist_ok=True)
        DEFAULT_CACHE.save(os.path.join(root, "brackets.pkl"))


def cmd_bracket(args, rc):
    n = args.n
    w1, _ = parse_word(args.w1)
    w2, _ = parse_word(args.w2)
    root = _load_cache()
    if args.mode == "generic":
        f = TracePolynomial.trace(GENERIC, n, w1)
        g = TracePolynomial.trace(GENERIC, n, w2)
        print(poisson_bracket(f, g).format())
    elif args.mode == "traceless":
        print(traceless_bracket(canonicalize(w1), canonicalize(w2), n).format())
    elif args.mode == "via-generic":
        print(bracket_via_generic(canonicalize(w1), canonicalize(w2), n).format())
    else:
        symbolic = traceless_bracket(canonicalize(w1), canonicalize(w2), n)
        cfg = SamplerConfig(args.seed)
        status = EXIT_OK
        for t in range(args.trials):
            pair = sample("generic", n, cfg, t)
            ev = Evaluator(pair)
            got = numeric_poisson(w1, w2, pair, ev)
            want = ev.trace_poly(symbolic)
            print(f"trial {t}: numeric {got} symbolic {want} {'ok' if got == want else 'MISMATCH'}")
            if got != want:
                status = EXIT_VERIFY
        _save_cache(root)
        return status
    _save_cache(root)
    return EXIT_OK


def cmd_verify(args, rc):
    if not args.relations and not args.table:
        raise UsageError("verify needs --relations or --table")
    cfg = SamplerConfig(args.seed)
    exprs = []
    if args.relations:
        with open(args.relations) as fh:
            fields, rels = load_relations(fh.read())
        n = int(fields["n"])
        ring = ring_for(n)
        exprs += [(f"({b[0]},{b[1]}) {ring.format(p)[:60]}", p) for b, p in rels]
        if args.poisson:
            for b, p in rels:
                for seed in (5, 6):
                    exprs.append((f"{{a{seed}, ({b[0]},{b[1]})}}", _poisson_expr(Poly.var(seed), p)))
    if args.table:
        with open(args.table) as fh:
            table = ExpressionTable.loads(fh.read())
        n = table.n
        for v in table.necklaces():
            exprs.append((f"T({v})", _table_expr(v, table[v])))
    print(rc.header())
    tasks = [([e for _, e in exprs], args.sampler, n, cfg, t) for t in range(args.trials)]
    if args.jobs > 1 and args.trials > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            per_trial = list(pool.map(_failing_on_trial, tasks))
    else:
        per_trial = [_failing_on_trial(t) for t in tasks]
    failed = 0
    for k, (label, _) in enumerate(exprs):
        bad = [t for t, fails in enumerate(per_trial) if k in fails]
        print(f"{label}: " + (f"fail (trials {bad})" if bad else f"pass ({args.trials} trials)"))
        failed += bool(bad)
    print(f"{len(exprs) - failed}/{len(exprs)} identities pass")
    return EXIT_VERIFY if failed else EXIT_OK


def _failing_on_trial(task):
    exprs, kind, n, cfg, t = task
    pair = sample(kind, n, cfg, t)
    ev = Evaluator(pair)
    return {k for k, e in enumerate(exprs) if evaluate(e, pair, ev) != 0}


class _Difference:
    """Picklable callable: Tr(v) - table value."""

    def __init__(self, v, p):
        self.v, self.p = v, p

    def __call__(self, pair):
        ev = Evaluator(pair)
        return ev.necklace(self.v) - ev.genpoly(self.p)


class _Poisson:
    def __init__(self, f, g):
        self.f, self.g = f, g

    def __call__(self, pair):
        return numeric_poisson(self.f, self.g, pair)


def _table_expr(v, p):
    return _Difference(v, p)


def _poisson_expr(f, g):
    return _Poisson(f, g)


def cmd_hilbert(args, rc):
    _check_n(args.n)
    D = args.max_degree
    coeffs = target_series(args.n).coefficients(D)
    dims = relation_space_dims(args.n, D)
    print(rc.header())
    print("degree target relations")
    for d in range(D + 1):
        print(f"{d} {coeffs[d]} {dims[d]}")
    return EXIT_OK


def cmd_map(args, rc):
    with open(args.relations) as fh:
        fields, rels = load_relations(fh.read())
    n = int(fields["n"])
    smap = com_map(n) if args.target == "com" else cm_map(n)
    report = verify_map(smap, args.trials, SamplerConfig(args.seed))
    for line in report.lines():
        print(line, file=sys.stderr)
    if smap.printed:
        smap = report.resolved_map()
    images = image_relations(rels, smap)
    text = dump_image_relations(images, smap, fields.get("max_degree", "?"), fields.get("seed", "0"))
    _write(args.out, text.replace("\n", f"\n{rc.header()}\n", 1))
    failing = verify_images(images, smap, args.trials, SamplerConfig(args.seed))
    print(f"{len(images)} image relation(s); {len(failing)} fail on sampled points", file=sys.stderr)
    return EXIT_VERIFY if failing or not report.passed else EXIT_OK


def cmd_identity3(args, rc):
    result = mine(3, 12)
    rels = result.ideal.relations
    if len(rels) != 1:
        print(f"expected one n=3 relation, found {len(rels)}", file=sys.stderr)
        return EXIT_VERIFY
    report = n3_identity_check(rels[0][1], args.trials, SamplerConfig(args.seed))
    print(rc.header())
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_accounting(args, rc):
    primary = primary_degrees_n4()
    secondary = secondary_degrees_n4()
    if args.drop_secondary:
        secondary = secondary[:-args.drop_secondary]
    res = hironaka_accounting(primary, secondary, c42_series())
    print(rc.header())
    print(f"primary={res.primary_count} (expected {res.expected_primary_count}) secondary={res.secondary_count}")
    print(res.verdict())
    return EXIT_OK if res.match else EXIT_VERIFY


def build_parser():
    p = argparse.ArgumentParser(prog="necklace-invariants",
                                description="Trace invariants of pairs of matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=True, degree=False, trials=None):
        if n:
            sp.add_argument("--n", type=int, default=4)
        if degree:
            sp.add_argument("--max-degree", type=int, default=degree)
        sp.add_argument("--seed", type=int, default=0)
        if trials is not None:
            sp.add_argument("--trials", type=int, default=trials)
        sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    sp = sub.add_parser("table", help="mine and write the expression table")
    common(sp, degree=11)
    sp.add_argument("--order", choices=sorted(ORDERS), default="custom")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("bracket", help="bracket of two necklaces")
    common(sp, trials=5)
    sp.add_argument("--mode", choices=("generic", "traceless", "via-generic", "numeric"), default="traceless")
    sp.add_argument("w1")
    sp.add_argument("w2")
    sp.set_defaults(func=cmd_bracket)

    sp = sub.add_parser("mine", help="mine relations degree by degree")
    common(sp, degree=13)
    sp.add_argument("--order", choices=sorted(ORDERS), default="custom")
    sp.add_argument("--out", default="-")
    sp.add_argument("--table-out")
    sp.add_argument("--no-special", action="store_true", help="skip the commutator-power equation")
    sp.set_defaults(func=cmd_mine)

    sp = sub.add_parser("verify", help="check relations or table entries on sampled pairs")
    common(sp, n=False, trials=20)
    sp.add_argument("--n", type=int, help="ignored; read from the input header")
    sp.add_argument("--relations")
    sp.add_argument("--table")
    sp.add_argument("--sampler", choices=SAMPLERS, default="generic")
    sp.add_argument("--poisson", action="store_true", help="also check {a5, rho} and {a6, rho}")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hilbert", help="target series coefficients and relation-space dimensions")
    common(sp, degree=16)
    sp.set_defaults(func=cmd_hilbert)

    sp = sub.add_parser("map", help="images of relations on a commuting or Calogero-Moser variety")
    common(sp, n=False, trials=10)
    sp.add_argument("--relations", required=True)
    sp.add_argument("--target", choices=("com", "cm"), required=True)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("identity3", help="compare the r1..r5 identity with the mined n=3 relation")
    common(sp, n=False, trials=20)
    sp.set_defaults(func=cmd_identity3)

    sp = sub.add_parser("accounting", help="Hironaka decomposition check for n=4")
    common(sp, n=False)
    sp.add_argument("--drop-secondary", type=int, default=0, help="negative control")
    sp.set_defaults(func=cmd_accounting)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    rc = _run_config(args)
    try:
        return args.func(args, rc)
    except (UsageError, UnsupportedSize, WordSyntaxError, PolySyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
