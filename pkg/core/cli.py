# core/cli.py
"""
`drs` command line: one verb per library entry point, text or --json output.

Exit codes: 0 ok / property true, 1 property false, 2 usage or input error, 3 work limit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from .constants import EXIT_FALSE, EXIT_OK, EXIT_USAGE, EXIT_WORK_LIMIT
from .errors import DrsError, VerificationError, WorkLimitExceeded
from .experiments import CHECKS, run_checks, summarize
from .families import FamilyKind, FamilySpec
from .graph_core import (
    Graph,
    bfs_all_pairs,
    blocks_and_cut_vertices,
    is_connected,
    is_tree,
    line_graph,
    max_degree,
    parse_graph,
    write_graph,
)
from .help import how_it_works_md, usage_epilog
from .io import Settings, load_settings
from .reduction import (
    ThreeDMInstance,
    build_reduction,
    drs_from_matching,
    parse_3dm,
    solve_3dm_exhaustive,
    write_3dm,
)
from .report import build_report
from .resolving import doubly_resolving_pair, first_unresolved_pair, is_d_drs, is_drs_fast
from .solvers import (
    SolveResult,
    metric_dimension_exhaustive,
    min_d_drs_exhaustive,
    min_drs_decomposed,
    min_drs_exhaustive,
)
from .tree_line import (
    construct_min_drs_line_tree,
    lower_bound_line,
    mu_tree_formula,
    psi_line_tree_formula,
    tree_stats,
    upper_bound_drs_line,
)

log = logging.getLogger(__name__)

# above this many line vertices a witness is not re-verified through a distance matrix
MAX_VERIFY_VERTICES = 20_000

_JSON_ORDER = ("verb", "psi", "set", "verified", "bounds", "stats")


# ---- Output ------------------------------------------------------------------

def _emit(args, text_lines: Sequence[str], **fields: Any) -> None:
    if args.json:
        out = {"verb": args.verb}
        for key in _JSON_ORDER[1:]:
            if fields.get(key) is not None:
                out[key] = fields[key]
        out.update({k: v for k, v in fields.items() if k not in _JSON_ORDER and v is not None})
        print(json.dumps(out))
    else:
        for line in text_lines:
            print(line)


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


# ---- Input -------------------------------------------------------------------

def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _read_graph(path: str) -> Graph:
    g = parse_graph(_read_bytes(path))
    log.info("read %s: n=%d m=%d", path, g.n, g.m)
    return g


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="ascii")


def _resolve_label(g: Graph, label: str) -> int:
    try:
        return g.vertex_of_label(label)
    except DrsError:
        if label.count("_") == 1:
            a, b = label.split("_")
            return g.vertex_of_label(f"{b}_{a}")
        raise


def _labels(g: Graph, raw: str | None) -> list[int]:
    if not raw:
        return []
    return [_resolve_label(g, x.strip()) for x in raw.split(",") if x.strip()]


def _pair(g: Graph, raw: str) -> tuple[int, int]:
    found = _labels(g, raw)
    if len(found) != 2:
        raise DrsError(f"--pair needs exactly two labels u,v, got {raw!r}")
    return found[0], found[1]


def _names(g: Graph, vertices) -> list[str]:
    return [g.label_of(v) for v in vertices]


def _target(args, g: Graph) -> Graph:
    """L(g) with --line, g otherwise."""
    if getattr(args, "line", False):
        return line_graph(g)[0]
    return g


def _solver_kw(settings: Settings) -> dict:
    return dict(work_limit=settings.work_limit, threads=settings.worker_threads, batch_size=settings.batch_size)


# ---- Verbs -------------------------------------------------------------------

def cmd_gen(args, settings: Settings) -> int:
    spec = FamilySpec.parse(args.family, n=args.n, k=args.k, seed=args.seed, extra=args.extra)
    g = spec.build()
    _write_text(args.output, write_graph(g, comment=spec.describe()))
    if args.output and args.output != "-":
        _emit(args, [f"wrote {spec.describe()} (n={g.n}, m={g.m}) to {args.output}"],
              graph={"n": g.n, "m": g.m, "delta": max_degree(g)}, file=args.output)
    return EXIT_OK


def cmd_linegraph(args, settings: Settings) -> int:
    g = _read_graph(args.file)
    lg, _ = line_graph(g)
    _write_text(args.output, write_graph(lg, comment=f"line graph of {args.file}"))
    return EXIT_OK


def cmd_stats(args, settings: Settings) -> int:
    g = _read_graph(args.file)
    connected = is_connected(g)
    info = {"n": g.n, "m": g.m, "delta": max_degree(g), "connected": connected}
    lines = [f"vertices: {g.n}", f"edges: {g.m}", f"max degree: {info['delta']}", f"connected: {_yes(connected)}"]
    if connected:
        dec = blocks_and_cut_vertices(g)
        info.update(blocks=len(dec.blocks), cut_vertices=len(dec.cut_vertices), tree=is_tree(g))
        lines += [f"blocks: {len(dec.blocks)}", f"cut vertices: {len(dec.cut_vertices)}", f"tree: {_yes(is_tree(g))}"]
    stats = None
    if args.tree:
        ts = tree_stats(g)
        stats = ts.to_dict()
        lines += [
            f"leaves: {' '.join(_names(g, ts.leaves))}",
            f"majors: {' '.join(_names(g, ts.majors))}",
            f"exterior majors: {' '.join(_names(g, ts.exterior_majors))}",
            f"strong exterior majors: {' '.join(_names(g, ts.strong_exterior_majors))}",
            f"sigma={ts.sigma} ex={ts.ex} ex'={ts.ex_prime}",
        ]
    _emit(args, lines, stats=stats, graph=info)
    return EXIT_OK


def cmd_verify(args, settings: Settings) -> int:
    h = _target(args, _read_graph(args.file))
    S = _labels(h, args.set)
    D = _labels(h, args.d)
    if h.n == 1:
        log.warning("single-vertex graph: every set is vacuously a DRS")
    dm = bfs_all_pairs(h)
    ok = is_d_drs(dm, S, D) if D else is_drs_fast(dm, S)
    lines = [f"set: {' '.join(_names(h, sorted(set(S))))}", f"DRS: {_yes(ok)}"]
    extra: dict = {}
    if not ok:
        pair = first_unresolved_pair(dm, S)
        if pair is not None:
            u, v = pair
            lines.append(f"unresolved pair: {h.label_of(u)} {h.label_of(v)}")
            extra["unresolved"] = _names(h, pair)
        elif D:
            lines.append("D is not contained in the set")
    if args.pair:
        u, v = _pair(h, args.pair)
        found = doubly_resolving_pair(dm, S, u, v)
        by = _names(h, found) if found else None
        lines.append(f"{h.label_of(u)},{h.label_of(v)} doubly resolved by: {','.join(by) if by else 'none'}")
        extra["resolved_by"] = by
    _emit(args, lines, set=_names(h, sorted(set(S))), verified=ok, **extra)
    return EXIT_OK if ok else EXIT_FALSE


def _print_result(args, h: Graph, res: SolveResult, what: str = "psi") -> None:
    lines = [
        f"{what}: {res.psi}",
        f"set: {' '.join(_names(h, res.witness))}",
        f"method: {res.method.value}",
        "verified: yes",
        f"checked: {res.checked:,} in {res.elapsed:.3f}s",
    ]
    _emit(args, lines, psi=res.psi, set=_names(h, res.witness), verified=True,
          method=res.method.value, checked=res.checked,
          fixed=_names(h, res.fixed) or None, quantity=None if what == "psi" else what)


def cmd_solve(args, settings: Settings) -> int:
    g = _read_graph(args.file)
    h = _target(args, g)
    kw = _solver_kw(settings)
    if args.d and (args.decompose or args.mu):
        raise DrsError("--d only applies to --exact")
    if args.decompose:
        res = min_drs_decomposed(h, **kw)
    elif args.mu:
        res = metric_dimension_exhaustive(bfs_all_pairs(h), **kw)
        _print_result(args, h, res, what="mu")
        return EXIT_OK
    else:
        dm = bfs_all_pairs(h)
        D = _labels(h, args.d)
        if D:
            res = min_d_drs_exhaustive(dm, D, **kw)
        else:
            hint = lower_bound_line(g) if args.line and g.n >= 3 else None
            res = min_drs_exhaustive(dm, hint, **kw)
    _print_result(args, h, res)
    return EXIT_OK


def cmd_tree(args, settings: Settings) -> int:
    t = _read_graph(args.file)
    ts = tree_stats(t)
    stats = ts.to_dict()
    if args.construct:
        S = construct_min_drs_line_tree(t)
        verified = None
        if t.m <= MAX_VERIFY_VERTICES:
            verified = is_drs_fast(bfs_all_pairs(line_graph(t)[0]), S)
            if not verified:
                raise VerificationError(f"constructed set {S} failed verification")
        elif not args.trust_formula:
            raise DrsError(
                f"L(T) has {t.m} vertices; too large to verify through a distance matrix "
                f"(pass --trust-formula to print the construction unverified)"
            )
        # line vertex i is tree edge i
        names = [f"{t.label_of(u)}_{t.label_of(v)}" for u, v in (t.edges[i] for i in S)]
        lines = [f"psi: {len(S)}", f"set: {' '.join(names)}",
                 f"verified: {'yes' if verified else 'skipped (--trust-formula)'}"]
        _emit(args, lines, psi=len(S), set=names, verified=verified, stats=stats)
    elif args.mu:
        mu = mu_tree_formula(ts)
        _emit(args, [f"mu: {mu}"], stats=stats, mu=mu)
    elif args.psi:
        psi = psi_line_tree_formula(ts)
        _emit(args, [f"psi: {psi}", f"sigma={ts.sigma} ex'={ts.ex_prime}"], psi=psi, stats=stats)
    else:
        lines = [f"sigma={ts.sigma} ex={ts.ex} ex'={ts.ex_prime}",
                 f"strong exterior majors: {' '.join(_names(t, ts.strong_exterior_majors))}"]
        _emit(args, lines, stats=stats)
    return EXIT_OK


def cmd_bounds(args, settings: Settings) -> int:
    g = _read_graph(args.file)
    lower = lower_bound_line(g)
    S = upper_bound_drs_line(g)
    lg, _ = line_graph(g)
    names = _names(lg, S)
    lines = [f"lower: {lower}", f"upper: {g.n - 1}", f"spanning tree: {' '.join(names)}", "verified: yes"]
    _emit(args, lines, set=names, verified=True, bounds={"lower": lower, "upper": g.n - 1})
    return EXIT_OK


def cmd_decompose(args, settings: Settings) -> int:
    h = _target(args, _read_graph(args.file))
    dec = blocks_and_cut_vertices(h)
    blocks = [_names(h, b) for b in dec.blocks]
    cuts = _names(h, dec.cut_vertices)
    lines = [f"block {i}: {' '.join(b)}" for i, b in enumerate(blocks)] + [f"cut vertices: {' '.join(cuts)}"]
    _emit(args, lines, blocks=blocks, cut_vertices=cuts)
    return EXIT_OK


def _instance(args) -> ThreeDMInstance:
    path = args.file or args.instance
    if path:
        return parse_3dm(_read_bytes(path))
    if args.n is None or not args.triples:
        raise DrsError("reduce needs FILE, --file or --n with --triples")
    return ThreeDMInstance(args.n, tuple(_triple(t) for t in args.triples.split(";") if t.strip()))


def _triple(raw: str) -> tuple[int, int, int]:
    parts = [x.strip() for x in raw.split(",")]
    try:
        a, b, c = (int(x) for x in parts)
    except ValueError:
        raise DrsError(f"--triples: expected three integers a,b,c, got {raw.strip()!r}") from None
    return a, b, c


def cmd_reduce(args, settings: Settings) -> int:
    inst = _instance(args)
    N = args.copies or settings.reduction_copies
    rg = build_reduction(inst, N)
    if args.output:
        Path(args.output).write_text(write_graph(rg.graph, comment=write_3dm(inst).strip()), encoding="ascii")
    sz = rg.sizes
    lines = [f"tau={rg.tau} lambda={rg.lam} K={rg.K} |I|={rg.i_side} |J|={rg.j_side} "
             f"|V|={rg.graph.n} |E|={rg.graph.m}"]
    fields: dict = {"gadget": sz}
    code = EXIT_OK
    if args.with_matching:
        matching = solve_3dm_exhaustive(inst, settings.work_limit)
        if matching is None:
            lines.append("no perfect matching")
            fields["matching"] = []
            code = EXIT_FALSE
        else:
            R = drs_from_matching(rg, matching)
            lg, _ = line_graph(rg.graph)
            verified = is_drs_fast(bfs_all_pairs(lg), R)
            if not verified:
                raise VerificationError(f"certificate {R} failed verification")
            names = _names(lg, R)
            lines += [f"matching: {' '.join(map(str, matching))}", f"psi<=K: {len(R)}",
                      f"set: {' '.join(names)}", "verified: yes"]
            fields.update(psi=len(R), set=names, verified=True, matching=list(matching))
    _emit(args, lines, **fields)
    return code


def cmd_check(args, settings: Settings) -> int:
    results = run_checks(args.only, settings, quick=args.quick)
    summary = summarize(results)
    if args.report:
        readme = (settings.report or {}).get("readme")
        Path(args.report).write_bytes(build_report(results, summary, readme))
    bad = int(summary["mismatches"].sum())
    _emit(args, [summary.to_string(index=False), f"mismatches: {bad}"],
          verified=bad == 0, checks=summary.to_dict(orient="records"), report=args.report)
    return EXIT_OK if bad == 0 else EXIT_FALSE


# ---- Parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    common.add_argument("--threads", type=int, default=None, help="solver threads (0 = all cores)")
    common.add_argument("--work-limit", type=int, default=None, help="subset-check budget per solve")
    common.add_argument("--config", default=None, help="config.yaml path")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(
        prog="drs",
        description=how_it_works_md.strip(),
        epilog=usage_epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    s = sub.add_parser("gen", parents=[common], help="generate a graph family")
    s.add_argument("family", choices=[k.value for k in FamilyKind])
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--extra", type=int, default=0)
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_gen)

    s = sub.add_parser("linegraph", parents=[common], help="write L(G)")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_linegraph)

    s = sub.add_parser("stats", parents=[common], help="graph statistics")
    s.add_argument("file")
    s.add_argument("--tree", action="store_true", help="add leaf / major vertex statistics")
    s.set_defaults(run=cmd_stats)

    s = sub.add_parser("verify", parents=[common], help="check a DRS")
    s.add_argument("file")
    s.add_argument("--set", required=True, help="comma-separated vertex labels (a_b for line vertices)")
    s.add_argument("--d", help="labels that must be contained in the set")
    s.add_argument("--line", action="store_true", help="labels name vertices of L(G)")
    s.add_argument("--pair", help="two labels u,v: show which pair of the set doubly resolves them")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("solve", parents=[common], help="exact minimum DRS")
    s.add_argument("file")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exhaustive search (default)")
    mode.add_argument("--decompose", action="store_true", help="block decomposition")
    mode.add_argument("--mu", action="store_true", help="metric dimension instead of Psi")
    s.add_argument("--line", action="store_true", help="solve on L(G)")
    s.add_argument("--d", help="labels of D for Psi_D")
    s.set_defaults(run=cmd_solve)

    s = sub.add_parser("tree", parents=[common], help="linear-time results for trees")
    s.add_argument("file")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--stats", action="store_true")
    mode.add_argument("--construct", action="store_true", help="minimum DRS of L(T)")
    mode.add_argument("--psi", action="store_true", help="Psi(L(T)) = sigma - ex'")
    mode.add_argument("--mu", action="store_true", help="mu(T) by formula")
    s.add_argument("--trust-formula", action="store_true", help="skip verification on huge trees")
    s.set_defaults(run=cmd_tree)

    s = sub.add_parser("bounds", parents=[common], help="lower and upper bound for Psi(L(G))")
    s.add_argument("file")
    s.set_defaults(run=cmd_bounds)

    s = sub.add_parser("decompose", parents=[common], help="blocks and cut vertices")
    s.add_argument("file")
    s.add_argument("--line", action="store_true")
    s.set_defaults(run=cmd_decompose)

    s = sub.add_parser("reduce", parents=[common], help="3DM gadget")
    s.add_argument("instance", nargs="?")
    s.add_argument("--file")
    s.add_argument("--n", type=int)
    s.add_argument("--triples", help='"a,b,c;a,b,c;..."')
    s.add_argument("--N", dest="copies", type=int, default=None, help="replication count")
    s.add_argument("--with-matching", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_reduce)

    s = sub.add_parser("check", parents=[common], help="run verification corpora")
    s.add_argument("--only", nargs="+", choices=list(CHECKS))
    s.add_argument("--report", help="write an .xlsx report")
    s.add_argument("--quick", action="store_true")
    s.set_defaults(run=cmd_check)
    return p


def _setup_logging(verbose: int) -> None:
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    _setup_logging(args.verbose)

    try:
        settings = load_settings(args.config, work_limit=args.work_limit, threads=args.threads)
        return args.run(args, settings)
    except WorkLimitExceeded as e:
        print(f"drs: {e}", file=sys.stderr)
        return EXIT_WORK_LIMIT
    except (DrsError, OSError) as e:
        print(f"drs: {e}", file=sys.stderr)
        return EXIT_USAGE
