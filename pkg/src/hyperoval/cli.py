"""Command-line front end.

Exit codes:
    0  success (a complete search with zero survivors is a success)
    2  verification failed
    3  usage or parse error
    4  search interrupted; the checkpoint holds the completed prefixes
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time

from . import __version__, report
from .audit import symmetry_audit
from .field import FieldError
from .geometry import Spread, certify_hyperoval, certify_graph, label
from .linpoly import LinearizedPoly
from .search.covering import covering_radius
from .search.engine import MODES, SIDES, SearchError, SearchTask, run_search
from .search.checkpoint import CheckpointError
from .search.system import fast_shears_proof, solve_gtf64_system
from .semifield import SpecError, coefficient_orbits, spread_set, symmetry_group, verify_spread_set
from .specfile import ParseError, load_spec, parse_candidate

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INTERRUPTED = 0, 2, 3, 4
THREADS_ENV = "HYPEROVAL_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if v < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _emit(doc: dict, output: str | None) -> None:
    report.validate(doc)
    if output:
        report.write(doc, output)
    else:
        sys.stdout.write(report.dumps(doc))


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def cmd_check_semifield(args) -> int:
    spec = load_spec(args.spec)
    c = spread_set(spec)
    rep = verify_spread_set(c)
    norm = spec.norm_check()
    ok = rep.ok and (norm is None or norm["ok"])
    result = {"status": _status(ok), "spread_set": rep.as_dict(), "additive": c.additive, "norm": norm}
    print(f"{_status(ok)} additive={str(c.additive).lower()}", file=sys.stderr)
    if not rep.ok:
        print(f"offending pair: {rep.as_dict()['offending_pair']} rank={rep.offending_rank}", file=sys.stderr)
    _emit(report.envelope("check-semifield", {"spec": spec.describe()}, result), args.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(args) -> int:
    spec = load_spec(args.spec)
    threads = args.threads if args.threads is not None else _default_threads()
    task = SearchTask(
        spec,
        side=args.side,
        mode=args.mode,
        threads=threads,
        checkpoint=args.checkpoint,
        resume=args.resume,
        max_prefixes=args.max_prefixes,
        prefix_limit=args.prefix_limit,
    )
    last = [0.0]

    def progress(done, total):
        now = time.monotonic()
        if args.quiet or (now - last[0] < 5 and done != total):
            return
        last[0] = now
        print(f"progress {done}/{total} prefixes ({100 * done / total:.1f}%)", file=sys.stderr, flush=True)

    doc = run_search(task, progress)
    _emit(doc, args.output)
    v = doc["result"]["verdicts"]
    print(
        f"survivors={v['survivor_count']} complete={str(v['complete']).lower()} "
        f"coverage_exact={str(v['coverage_exact']).lower()}",
        file=sys.stderr,
    )
    if doc["timing"]["interrupted"]:
        return EXIT_INTERRUPTED
    if not v["all_survivors_certified"]:
        return EXIT_FAIL
    return EXIT_OK


def cmd_solve_system(args) -> int:
    if args.with_parity:
        res = fast_shears_proof()
        ok = res["no_shears_hyperoval"]
        res["system"]["solutions"] = [[f"{v:#04x}" for v in s] for s in res["system"]["solutions"]]
    else:
        res = solve_gtf64_system()
        ok = res["solutions"] == [(0, 0, 0)]
        res["solutions"] = [[f"{v:#04x}" for v in s] for s in res["solutions"]]
    res["status"] = _status(ok)
    _emit(report.envelope("solve-gtf64-system", {"with_parity": args.with_parity}, res), args.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_covering_radius(args) -> int:
    spec = load_spec(args.spec)
    c = spread_set(spec)
    ctx = spec.ctx
    tr = None
    if args.exact and ctx.n > args.exact_limit:
        group = symmetry_group(spec, c)
        tr = coefficient_orbits(ctx, group.pairs, "shears", min(2, max(ctx.n - 2, 0)))
    res = covering_radius(ctx, c.maps, exact_limit=args.exact_limit, transversal=tr, samples=args.samples, seed=args.seed)
    result = res.as_dict()
    result["shears_hyperoval_exists"] = None if res.exact is None else res.exact == ctx.n - 1
    task = {"spec": spec.describe(), "exact_limit": args.exact_limit, "samples": args.samples, "seed": args.seed}
    _emit(report.envelope("covering-radius", task, result), args.output)
    return EXIT_OK


def cmd_certify(args) -> int:
    spec = load_spec(args.spec)
    ctx = spec.ctx
    d = Spread(spread_set(spec))
    if args.candidate:
        with open(args.candidate) as fh:
            hc = parse_candidate(fh.read(), ctx)
        cert = certify_hyperoval(hc, d).as_dict()
        ok = bool(cert["hyperoval"])
        task = {"spec": spec.describe(), "candidate": {"size": hc.size(), "infinite": [label(e) for e in hc.infinite]}}
    else:
        side = "graph" if args.graph else "cograph"
        f = LinearizedPoly.parse(ctx, args.graph or args.cograph)
        cert = certify_graph(f, d, side)
        ok = bool(cert["certified"])
        task = {"spec": spec.describe(), side: f.hex()}
    cert["status"] = _status(ok)
    _emit(report.envelope("certify", task, cert), args.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_symmetry_report(args) -> int:
    spec = load_spec(args.spec)
    res = symmetry_audit(spec, args.side)
    print(f"verified pairs: {res['verified_pairs']}", file=sys.stderr)
    print(f"gamma-set order: {res['gamma_order']}", file=sys.stderr)
    pub = res.get("published")
    if pub:
        print(f"gamma-set vs x^21 = 1 ({pub['gamma_claim_order']} elements): {pub['gamma_claim']}", file=sys.stderr)
        print(
            f"printed pair condition: {pub['printed_condition']} "
            f"({pub['printed_condition_verified']} of {pub['printed_condition_pairs']} pairs verify)",
            file=sys.stderr,
        )
        print(f"identity-pair claim: {pub['identity_claim']}", file=sys.stderr)
        print(
            f"published transversal: {pub['published_transversal']} "
            f"({pub['leading_orbits_missed_by_published']} of {pub['leading_orbits']} leading orbits missed)",
            file=sys.stderr,
        )
    _emit(report.envelope("symmetry-report", {"spec": spec.describe(), "side": args.side}, res), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hyperoval", description="Translation hyperovals in semifield planes of order 2^n.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp, spec=True):
        if spec:
            sp.add_argument("spec", help="semifield spec file")
        sp.add_argument("-o", "--output", help="write the JSON report here instead of stdout")

    sp = sub.add_parser("check-semifield", help="verify the spread-set property")
    common(sp)
    sp.set_defaults(func=cmd_check_semifield)

    sp = sub.add_parser("search", help="exhaustive shears / non-shears search")
    common(sp)
    sp.add_argument("--side", choices=SIDES, default="shears")
    sp.add_argument("--mode", choices=MODES, default="safe")
    sp.add_argument("--threads", type=_positive, help=f"worker threads (default ${THREADS_ENV} or 1)")
    sp.add_argument("--checkpoint", help="append-only prefix log")
    sp.add_argument("--resume", action="store_true", help="continue from --checkpoint")
    sp.add_argument("--max-prefixes", type=_positive, help="stop after this many new prefixes (exit 4)")
    sp.add_argument("--prefix-limit", type=_positive, help="sweep only the first K prefixes")
    sp.add_argument("-q", "--quiet", action="store_true", help="no progress lines")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("solve-gtf64-system", help="brute-force the GF(64) coefficient system")
    common(sp, spec=False)
    sp.add_argument("--with-parity", action="store_true", help="also run the F4 parity check")
    sp.set_defaults(func=cmd_solve_system)

    sp = sub.add_parser("covering-radius", help="rank-metric covering radius of the spread set")
    common(sp)
    sp.add_argument("--exact-limit", type=int, default=4)
    sp.add_argument("--exact", action="store_true", help="threshold search above the exhaustive limit")
    sp.add_argument("--samples", type=_positive, default=20000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_covering_radius)

    sp = sub.add_parser("certify", help="incidence certification of a candidate")
    common(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--candidate", help="candidate file (point / infinite lines)")
    g.add_argument("--graph", help="coefficients of f, comma-separated hex")
    g.add_argument("--cograph", help="coefficients of g, comma-separated hex")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("symmetry-report", help="verified (alpha, beta) symmetries and transversals")
    common(sp)
    sp.add_argument("--side", choices=SIDES, default="shears")
    sp.set_defaults(func=cmd_symmetry_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "resume", False) and not args.checkpoint:
        print("hyperoval: error: --resume needs --checkpoint", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except (SearchError, CheckpointError) as e:
        print(f"hyperoval: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (ParseError, FieldError, SpecError, UsageError, ValueError) as e:
        print(f"hyperoval: error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"hyperoval: error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except KeyboardInterrupt:
        return EXIT_INTERRUPTED


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
