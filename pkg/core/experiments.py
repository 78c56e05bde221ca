# core/experiments.py
"""
Batch verification runs over seeded corpora.

Every check returns a DataFrame with one row per instance (or per aggregated group) and a
boolean `match` column. Corpus sizes and the base seed come from the `checks:` section of
config.yaml; `quick=True` applies the `checks.quick` overrides.
"""

from __future__ import annotations

import logging
import time
from itertools import combinations
from typing import Callable, Dict, Iterable, Iterator, List, Sequence

import numpy as np
import pandas as pd

from .errors import VerificationError
from .families import (
    SplitMix64,
    ak_edges,
    ak_line_vertex,
    ak_m,
    ak_predicted_distance,
    example_tree,
    gen_ak,
    gen_basic,
    gen_random_connected,
    gen_random_tree,
    gen_tk,
)
from .graph_core import (
    Graph,
    bfs_all_pairs,
    blocks_and_cut_vertices,
    is_connected,
    line_graph,
    max_degree,
)
from .io import Settings
from .reduction import (
    SAMPLE_INSTANCE,
    build_reduction,
    drs_from_matching,
    edge_distance_class,
    r_prime,
    random_3dm,
    sd_line_vertex,
    solve_3dm_exhaustive,
)
from .resolving import f_matrix, is_doubly_distance_resolving_on, is_drs_fast, is_drs_naive
from .solvers import (
    metric_dimension_exhaustive,
    min_d_drs_exhaustive,
    min_drs_decomposed,
    min_drs_exhaustive,
    psi_d_clique,
)
from .tree_line import (
    construct_min_drs_line_tree,
    lower_bound_line,
    mu_tree_formula,
    predicted_line_blocks,
    psi_line_tree_formula,
    tree_stats,
    upper_bound_drs_line,
)

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240601


# ---- Helpers ---------------------------------------------------------------

def _seed(settings: Settings) -> int:
    return int(settings.checks.get("seed", DEFAULT_SEED))


def _kw(settings: Settings, n: int) -> dict:
    """Solver keywords; threads only pay off on larger candidate spaces."""
    return dict(
        work_limit=settings.work_limit,
        threads=settings.worker_threads if n >= 24 else 1,
        batch_size=settings.batch_size,
    )


def _cycle(lo: int, hi: int, i: int) -> int:
    return lo + i % (hi - lo + 1)


def connected_graphs(n: int) -> Iterator[Graph]:
    """Every connected labelled graph on n vertices (all edge subsets of K_n)."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = tuple(p for b, p in enumerate(pairs) if (mask >> b) & 1)
        if len(edges) < n - 1:
            continue
        g = Graph(n, edges)
        if is_connected(g):
            yield g


def _psi_line(g: Graph, settings: Settings) -> int:
    lg, _ = line_graph(g)
    return min_drs_exhaustive(bfs_all_pairs(lg), lower_bound_line(g), **_kw(settings, lg.n)).psi


# ---- Checks ----------------------------------------------------------------

def check_tree_formula(settings: Settings, quick: bool = False) -> pd.DataFrame:
    """Psi(L(T)) by exhaustive search against sigma - ex', plus the linear-time witness."""
    p = lambda k, d: settings.check_param("tree_formula", k, d, quick)   # noqa: E731
    lo, hi = p("n_min", 3), p("n_max", 9)
    seed = _seed(settings)

    corpus = [("example", example_tree())]
    corpus += [(f"tree#{i}", gen_random_tree(_cycle(lo, hi, i), seed + i)) for i in range(p("random_trees", 200))]

    rows = []
    for name, t in corpus:
        lg, _ = line_graph(t)
        dm = bfs_all_pairs(lg)
        stats = tree_stats(t)
        formula = psi_line_tree_formula(stats)
        exact = min_drs_exhaustive(dm, lower_bound_line(t), **_kw(settings, lg.n)).psi
        S = construct_min_drs_line_tree(t)
        ok = len(S) == formula and is_drs_fast(dm, S)
        rows.append(dict(instance=name, n=t.n, sigma=stats.sigma, ex_prime=stats.ex_prime,
                         formula=formula, exact=exact, witness_size=len(S), witness_ok=ok,
                         match=(exact == formula) and ok))

    big = p("witness_n_max", 2000)
    if big >= 3:
        t = gen_random_tree(big, seed - 1)
        lg, _ = line_graph(t)
        stats = tree_stats(t)
        S = construct_min_drs_line_tree(t)
        ok = len(S) == psi_line_tree_formula(stats) and is_drs_fast(bfs_all_pairs(lg), S)
        rows.append(dict(instance=f"witness-only n={big}", n=t.n, sigma=stats.sigma, ex_prime=stats.ex_prime,
                         formula=psi_line_tree_formula(stats), exact=None, witness_size=len(S),
                         witness_ok=ok, match=ok))
    return pd.DataFrame(rows)


def check_bounds_sandwich(settings: Settings, quick: bool = False) -> pd.DataFrame:
    """ceil(log2(1+Delta)) <= Psi(L(G)) <= n-1 and the spanning-tree witness."""
    p = lambda k, d: settings.check_param("bounds_sandwich", k, d, quick)   # noqa: E731
    seed = _seed(settings)

    corpus: List[tuple[str, Graph]] = []
    for n in range(3, p("exhaustive_n_max", 5) + 1):
        corpus += [(f"all n={n} #{i}", g) for i, g in enumerate(connected_graphs(n))]
    n_values = list(p("n_values", [6, 7]))
    rng = SplitMix64(seed)
    for i in range(p("random_graphs", 300)):
        n = n_values[i % len(n_values)]
        extra = rng.below(n * (n - 1) // 2 - (n - 1) + 1)
        corpus.append((f"random#{i}", gen_random_connected(n, extra, seed + i)))

    rows = []
    for name, g in corpus:
        lower = lower_bound_line(g)
        psi = _psi_line(g, settings)
        try:
            upper_ok = len(upper_bound_drs_line(g)) == g.n - 1
        except VerificationError:
            upper_ok = False
        rows.append(dict(instance=name, n=g.n, m=g.m, delta=max_degree(g), lower=lower, psi=psi,
                         upper=g.n - 1, upper_witness_ok=upper_ok,
                         match=lower <= psi <= g.n - 1 and upper_ok))
    return pd.DataFrame(rows)


def check_ak_family(settings: Settings, quick: bool = False) -> pd.DataFrame:
    rows = []
    for k in settings.check_param("ak_family", "k_values", [2, 3, 4, 5], quick):
        g = gen_ak(k)
        lg, _ = line_graph(g)
        dm = bfs_all_pairs(lg)
        psi = min_drs_exhaustive(dm, **_kw(settings, lg.n)).psi
        S = [g.edge_id(g.vertex_of_label(f"w{i}"), g.vertex_of_label(f"w'{i}")) for i in range(ak_m(k))]
        rows.append(dict(k=k, delta=max_degree(g), expected=ak_m(k), psi=psi, w_set_is_drs=is_drs_fast(dm, S),
                         match=psi == ak_m(k) and max_degree(g) == k and is_drs_fast(dm, S)))
    return pd.DataFrame(rows)


def triangle_census(k: int = 2) -> tuple[int, int]:
    """(DRS count, DRSs missing two edges of some triangle) over all subsets of V(L(T_k))."""
    g = gen_tk(k)
    lg, _ = line_graph(g)
    dm = bfs_all_pairs(lg)
    triangles = []
    for i in range(1, k + 1):
        u, x, y = 0, g.vertex_of_label(f"x{i}"), g.vertex_of_label(f"y{i}")
        triangles.append({g.edge_id(u, x), g.edge_id(u, y), g.edge_id(x, y)})
    drs = bad = 0
    for mask in range(1 << lg.n):
        S = [v for v in range(lg.n) if (mask >> v) & 1]
        if is_drs_fast(dm, S):
            drs += 1
            if any(len(tri & set(S)) < 2 for tri in triangles):
                bad += 1
    return drs, bad


def check_tk_family(settings: Settings, quick: bool = False) -> pd.DataFrame:
    rows = []
    for k in settings.check_param("tk_family", "k_values", [1, 2, 3, 4], quick):
        g = gen_tk(k)
        psi = _psi_line(g, settings) if g.n >= 3 else None
        rows.append(dict(instance=f"T_{k}", k=k, delta=max_degree(g), expected=2 * k, psi=psi,
                         match=psi == 2 * k and max_degree(g) == 2 * k))
    drs, bad = triangle_census(2)
    rows.append(dict(instance="T_2 subset census", k=2, delta=4, expected=0, psi=bad, match=drs > 0 and bad == 0))
    return pd.DataFrame(rows)


def check_clique_lemma(settings: Settings, quick: bool = False) -> pd.DataFrame:
    rows = []
    for n in range(2, settings.check_param("clique_lemma", "n_max", 6, quick) + 1):
        dm = bfs_all_pairs(gen_basic("complete", n))
        for mask in range(1 << n):
            D = [v for v in range(n) if (mask >> v) & 1]
            formula = psi_d_clique(n, len(D))
            exact = min_d_drs_exhaustive(dm, D, **_kw(settings, n)).psi
            rows.append(dict(n=n, D=" ".join(map(str, D)), formula=formula, exact=exact, match=formula == exact))
    return pd.DataFrame(rows)


def check_decomposition(settings: Settings, quick: bool = False) -> pd.DataFrame:
    p = lambda k, d: settings.check_param("decomposition", k, d, quick)   # noqa: E731
    seed = _seed(settings)
    n_max = p("n_max", 8)
    corpus: List[tuple[str, Graph]] = []
    attempt = 0
    while len(corpus) < p("random_graphs", 100):
        n = _cycle(4, n_max, attempt)
        rng = SplitMix64(seed + 7919 * attempt)
        g = gen_random_connected(n, rng.below(n), seed + attempt)
        attempt += 1
        if len(blocks_and_cut_vertices(g).blocks) > 1:
            corpus.append((f"random#{attempt - 1}", g))
    for i in range(p("random_trees", 30)):
        t = gen_random_tree(_cycle(3, p("tree_n_max", 9), i), seed + 31 * i)
        corpus.append((f"L(tree#{i})", line_graph(t)[0]))

    rows = []
    for name, g in corpus:
        dec = min_drs_decomposed(g, **_kw(settings, g.n))
        exact = min_drs_exhaustive(bfs_all_pairs(g), **_kw(settings, g.n))
        rows.append(dict(instance=name, n=g.n, m=g.m, method=dec.method.value, decomposed=dec.psi,
                         exhaustive=exact.psi, match=dec.psi == exact.psi))
    return pd.DataFrame(rows)


def check_line_tree_blocks(settings: Settings, quick: bool = False) -> pd.DataFrame:
    p = lambda k, d: settings.check_param("line_tree_blocks", k, d, quick)   # noqa: E731
    seed = _seed(settings)
    rows = []
    for i in range(p("random_trees", 100)):
        t = gen_random_tree(_cycle(3, p("n_max", 200), 17 * i), seed + 101 * i)
        lg, _ = line_graph(t)
        got = blocks_and_cut_vertices(lg)
        want = predicted_line_blocks(t)
        rows.append(dict(instance=f"tree#{i}", n=t.n, blocks=len(got.blocks), cut_vertices=len(got.cut_vertices),
                         match=got == want))
    return pd.DataFrame(rows)


def _reduction_corpus(settings: Settings, quick: bool) -> Iterable[tuple[str, object]]:
    p = lambda k, d: settings.check_param("reduction_certificates", k, d, quick)   # noqa: E731
    seed = _seed(settings)
    yield "sample", SAMPLE_INSTANCE
    n_max, t_max = p("n_max", 3), p("triples_max", 7)
    for i in range(p("instances", 20)):
        n = _cycle(1, n_max, i)
        t = _cycle(n, min(t_max, n ** 3), i // n_max)
        yield f"random#{i} n={n} t={t}", random_3dm(n, t, seed + i)


def check_reduction_certificates(settings: Settings, quick: bool = False) -> pd.DataFrame:
    copies = settings.check_param("reduction_certificates", "copies", [1, 2], quick)
    rows = []
    for name, inst in _reduction_corpus(settings, quick):
        matching = solve_3dm_exhaustive(inst, settings.work_limit)
        for N in copies:
            rg = build_reduction(inst, N)
            row = dict(instance=name, n=inst.n, triples=inst.t, N=N, tau=rg.tau, K=rg.K, matching=matching)
            lg, _ = line_graph(rg.graph)
            dm = bfs_all_pairs(lg)
            sd = sd_line_vertex(rg)
            row["classes_ok"] = all(
                edge_distance_class(rg, e) == dm(i, sd) for i, e in enumerate(rg.graph.edges)
            )
            row["r_prime_ok"] = is_doubly_distance_resolving_on(dm, r_prime(rg), sd)
            if matching is None:
                row["certificate_ok"] = None
                row["match"] = row["classes_ok"] and row["r_prime_ok"]
            else:
                R = drs_from_matching(rg, matching)
                row["certificate_ok"] = len(R) == rg.K and is_drs_fast(dm, R)
                row["match"] = row["classes_ok"] and row["r_prime_ok"] and row["certificate_ok"]
            rows.append(row)
    return pd.DataFrame(rows)


def _subsets(n: int) -> Iterator[list[int]]:
    for mask in range(1 << n):
        yield [v for v in range(n) if (mask >> v) & 1]


def check_verifier_equivalence(settings: Settings, quick: bool = False) -> pd.DataFrame:
    p = lambda k, d: settings.check_param("verifier_equivalence", k, d, quick)   # noqa: E731
    seed = _seed(settings)
    rows = []
    for n in range(2, p("exhaustive_n_max", 5) + 1):
        graphs = disagreements = pairs = 0
        for g in connected_graphs(n):
            dm = bfs_all_pairs(g)
            graphs += 1
            for S in _subsets(n):
                pairs += 1
                disagreements += is_drs_naive(dm, S) != is_drs_fast(dm, S)
        rows.append(dict(group=f"all connected n={n}", graphs=graphs, pairs=pairs,
                         disagreements=disagreements, match=disagreements == 0))

    rng = SplitMix64(seed ^ 0x5EED)
    n_max = p("n_max", 9)
    by_n: Dict[int, list[int]] = {}
    for i in range(p("random_pairs", 10000)):
        n = 2 + rng.below(n_max - 1)
        g = gen_random_connected(n, rng.below(n * (n - 1) // 2 - (n - 1) + 1), seed + i)
        dm = bfs_all_pairs(g)
        bits = rng.next_u64()
        S = [v for v in range(n) if (bits >> v) & 1]
        tally = by_n.setdefault(n, [0, 0])
        tally[0] += 1
        tally[1] += is_drs_naive(dm, S) != is_drs_fast(dm, S)
    for n in sorted(by_n):
        pairs, bad = by_n[n]
        rows.append(dict(group=f"random n={n}", graphs=pairs, pairs=pairs, disagreements=bad, match=bad == 0))
    return pd.DataFrame(rows)


def check_metric_dimension(settings: Settings, quick: bool = False) -> pd.DataFrame:
    """mu(T) = mu(L(T)) = sigma - ex on non-path trees, and Psi(T) = sigma on all trees."""
    p = lambda k, d: settings.check_param("metric_dimension", k, d, quick)   # noqa: E731
    seed = _seed(settings)
    lo, hi = p("n_min", 3), p("n_max", 9)
    corpus = [("example", example_tree())]
    corpus += [(f"tree#{i}", gen_random_tree(_cycle(lo, hi, i), seed + 13 * i)) for i in range(p("random_trees", 60))]

    rows = []
    for name, t in corpus:
        stats = tree_stats(t)
        dm = bfs_all_pairs(t)
        psi_t = min_drs_exhaustive(dm, **_kw(settings, t.n)).psi
        mu_t = metric_dimension_exhaustive(dm, **_kw(settings, t.n)).psi
        row = dict(instance=name, n=t.n, sigma=stats.sigma, ex=stats.ex, psi_tree=psi_t, mu_tree=mu_t,
                   mu_formula=mu_tree_formula(stats), mu_line=None)
        ok = psi_t == stats.sigma and mu_t == mu_tree_formula(stats)
        if not stats.is_path and t.n >= 4:
            lg, _ = line_graph(t)
            row["mu_line"] = metric_dimension_exhaustive(bfs_all_pairs(lg), **_kw(settings, lg.n)).psi
            ok = ok and row["mu_line"] == mu_t
        row["match"] = ok
        rows.append(row)
    return pd.DataFrame(rows)


# Edge labels of the two smallest A_k drawings: d(e, w1w'1) - d(e, w0w'0).
AK_LABELS = {2: [5, 3, 1, -1, -3, -5], 3: [5, 3, 1, 0, -1, -3, -5]}


def ak_f_labels(k: int) -> list[int]:
    g = gen_ak(k)
    lg, _ = line_graph(g)
    S = [g.edge_id(g.vertex_of_label(f"w{i}"), g.vertex_of_label(f"w'{i}")) for i in (0, 1)]
    deltas = f_matrix(bfs_all_pairs(lg), S)[:, 0]
    return sorted((int(x) for x in deltas), reverse=True)


def check_ak_distances(settings: Settings, quick: bool = False) -> pd.DataFrame:
    rows = []
    for k in settings.check_param("ak_distances", "k_values", list(range(4, 11)), quick):
        g = gen_ak(k)
        lg, _ = line_graph(g)
        dm = bfs_all_pairs(lg)
        edges = ak_edges(k)
        pairs = wrong = 0
        for e1 in (e for e in edges if e.form == "ww"):
            a = ak_line_vertex(g, e1)
            for e2 in edges:
                pairs += 1
                wrong += ak_predicted_distance(k, e1, e2) != dm(a, ak_line_vertex(g, e2))
        rows.append(dict(instance=f"A_{k}", k=k, pairs=pairs, wrong=wrong, match=wrong == 0))
    for k, want in AK_LABELS.items():
        got = ak_f_labels(k)
        rows.append(dict(instance=f"A_{k} labels", k=k, pairs=len(got), wrong=int(got != want), match=got == want))
    return pd.DataFrame(rows)


CHECKS: Dict[str, Callable[[Settings, bool], pd.DataFrame]] = {
    "tree_formula": check_tree_formula,
    "bounds_sandwich": check_bounds_sandwich,
    "ak_family": check_ak_family,
    "tk_family": check_tk_family,
    "clique_lemma": check_clique_lemma,
    "decomposition": check_decomposition,
    "line_tree_blocks": check_line_tree_blocks,
    "reduction_certificates": check_reduction_certificates,
    "verifier_equivalence": check_verifier_equivalence,
    "metric_dimension": check_metric_dimension,
    "ak_distances": check_ak_distances,
}


def run_checks(
    names: Sequence[str] | None,
    settings: Settings,
    quick: bool = False,
) -> Dict[str, pd.DataFrame]:
    """
    Run the named checks (all when None).
    Returns {name: DataFrame}; each frame carries its wall time in `attrs["seconds"]`.
    """
    names = list(CHECKS) if not names else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    results = {}
    for name in names:
        t0 = time.perf_counter()
        df = CHECKS[name](settings, quick)
        df.attrs["seconds"] = time.perf_counter() - t0
        bad = int((~df["match"].astype(bool)).sum()) if len(df) else 0
        log.info("%s: %d rows, %d mismatches, %.1fs", name, len(df), bad, df.attrs["seconds"])
        results[name] = df
    return results


def summarize(results: Dict[str, pd.DataFrame]) -> pd.DataFrame:
    rows = []
    for name, df in results.items():
        match = df["match"].astype(bool) if len(df) else pd.Series([], dtype=bool)
        rows.append({
            "check": name,
            "instances": int(len(df)),
            "mismatches": int((~match).sum()),
            "seconds": round(float(df.attrs.get("seconds", np.nan)), 3),
        })
    return pd.DataFrame(rows, columns=["check", "instances", "mismatches", "seconds"])
