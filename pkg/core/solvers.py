# core/solvers.py
"""
Exact minimum-DRS machinery.

Exhaustive searches walk candidate sets cardinality by cardinality, lexicographically
inside a cardinality, so the first hit is the lexicographically least minimum witness.
Candidates are evaluated in numpy batches; with threads > 1 several batches of the
same cardinality run side by side and the earliest hit still wins.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, islice
from typing import Any, Callable, Dict, Iterable, Sequence

import numpy as np

from .constants import DEFAULT_BATCH_SIZE, DEFAULT_WORK_LIMIT
from .errors import PreconditionError, VerificationError, WorkLimitExceeded
from .graph_core import (
    DistanceMatrix,
    Graph,
    VertexSet,
    bfs_all_pairs,
    blocks_and_cut_vertices,
    induced_subgraph,
    require_connected,
    vertex_set,
)
from .resolving import is_d_drs, is_drs_fast, is_resolving_set

log = logging.getLogger(__name__)

# keys of one batch must fit in int64
_MAX_KEY_BITS = 62


class SolveMethod(str, Enum):
    EXHAUSTIVE = "exhaustive"
    DECOMPOSITION = "decomposition"
    TREE_FORMULA = "tree_formula"
    CLIQUE_FORMULA = "clique_formula"


@dataclass(frozen=True)
class SolveResult:
    psi: int                    # Psi, Psi_D or mu depending on the solver
    witness: VertexSet
    method: SolveMethod
    elapsed: float              # seconds
    fixed: VertexSet = ()       # D for Psi_D results
    checked: int = 0            # candidate sets evaluated

    def to_dict(self) -> Dict[str, Any]:
        return {
            "psi": self.psi,
            "witness": list(self.witness),
            "method": self.method.value,
            "elapsed": round(self.elapsed, 6),
            "fixed": list(self.fixed),
            "checked": self.checked,
        }


# ---- Batched candidate evaluation -----------------------------------------

def _distinct_per_column(vals: np.ndarray, base: int) -> np.ndarray:
    """
    vals: (n, B, w) non-negative ints below `base`.
    Returns a (B,) bool array: True where the n rows of batch column b are pairwise distinct.
    """
    n, B, w = vals.shape
    if n <= 1:
        return np.ones(B, dtype=bool)
    if w * max(1, int(base - 1).bit_length()) <= _MAX_KEY_BITS:
        weights = np.int64(base) ** np.arange(w, dtype=np.int64)
        keys = (vals.astype(np.int64) * weights).sum(axis=2)
        keys.sort(axis=0)
        return ~(keys[1:] == keys[:-1]).any(axis=0)
    return np.array(
        [np.unique(vals[:, b, :], axis=0).shape[0] == n for b in range(B)], dtype=bool
    )


def _batch_drs(d: np.ndarray, rows: np.ndarray, diameter: int) -> np.ndarray:
    cols = d[:, rows].astype(np.int64)
    deltas = cols[:, :, 1:] - cols[:, :, :1] + diameter
    return _distinct_per_column(deltas, 2 * diameter + 1)


def _batch_resolving(d: np.ndarray, rows: np.ndarray, diameter: int) -> np.ndarray:
    return _distinct_per_column(d[:, rows], diameter + 1)


class _SubsetSearch:
    """Walks the candidate sets of one cardinality under a shared work budget."""

    def __init__(
        self,
        dm: DistanceMatrix,
        batch_check: Callable[[np.ndarray, np.ndarray, int], np.ndarray],
        work_limit: int | None = None,
        threads: int = 1,
        batch_size: int | None = None,
    ):
        self.dm = dm
        self.batch_check = batch_check
        self.work_limit = DEFAULT_WORK_LIMIT if work_limit is None else int(work_limit)
        self.threads = max(1, int(threads or 1))
        self.batch_size = batch_size or DEFAULT_BATCH_SIZE
        self.checked = 0

    def _chunks(self, pool: Sequence[int], k: int, fixed: VertexSet) -> Iterable[np.ndarray]:
        width = k + len(fixed)
        size = max(1, min(self.batch_size, (1 << 22) // max(1, self.dm.n * width)))
        it = combinations(pool, k)
        while True:
            chunk = list(islice(it, size))
            if not chunk:
                return
            rows = np.array(chunk, dtype=np.int64).reshape(len(chunk), k)
            if fixed:
                rows = np.hstack([rows, np.broadcast_to(np.array(fixed, dtype=np.int64), (len(chunk), len(fixed)))])
            yield np.sort(rows, axis=1)

    def _evaluate(self, rows: np.ndarray) -> int:
        hits = np.flatnonzero(self.batch_check(self.dm.d, rows, self.dm.diameter))
        return int(hits[0]) if hits.size else -1

    def _charge(self, count: int, k: int) -> None:
        if self.checked + count > self.work_limit:
            raise WorkLimitExceeded(self.work_limit, self.checked, k)
        self.checked += count

    def first(self, pool: Sequence[int], k: int, fixed: VertexSet = ()) -> VertexSet | None:
        chunks = self._chunks(pool, k, fixed)
        if self.threads == 1:
            for rows in chunks:
                self._charge(len(rows), k)
                idx = self._evaluate(rows)
                if idx >= 0:
                    return tuple(int(v) for v in rows[idx])
            return None

        with ThreadPoolExecutor(max_workers=self.threads) as pool_exec:
            while True:
                wave = list(islice(chunks, self.threads))
                if not wave:
                    return None
                self._charge(sum(len(r) for r in wave), k)
                for rows, idx in zip(wave, pool_exec.map(self._evaluate, wave)):
                    if idx >= 0:
                        return tuple(int(v) for v in rows[idx])


def _need_pairs(dm: DistanceMatrix) -> None:
    if dm.n < 2:
        raise PreconditionError("exhaustive solvers need at least two vertices")


# ---- Public solvers --------------------------------------------------------

def min_drs_exhaustive(
    dm: DistanceMatrix,
    lower_hint: int | None = None,
    *,
    work_limit: int | None = None,
    threads: int = 1,
    batch_size: int | None = None,
) -> SolveResult:
    """Psi(G) with the lexicographically least minimum witness."""
    _need_pairs(dm)
    t0 = time.perf_counter()
    search = _SubsetSearch(dm, _batch_drs, work_limit, threads, batch_size)
    start = min(dm.n, max(2, lower_hint or 0))
    pool = range(dm.n)
    for k in range(start, dm.n + 1):
        log.debug("trying cardinality %d (%d checked so far)", k, search.checked)
        hit = search.first(pool, k)
        if hit is not None:
            if not is_drs_fast(dm, hit):
                raise VerificationError(f"exhaustive witness {hit} is not a DRS")
            return SolveResult(k, hit, SolveMethod.EXHAUSTIVE, time.perf_counter() - t0, checked=search.checked)
    raise VerificationError("the full vertex set was not accepted as a DRS")


def min_d_drs_exhaustive(
    dm: DistanceMatrix,
    D: Sequence[int],
    *,
    work_limit: int | None = None,
    threads: int = 1,
    batch_size: int | None = None,
) -> SolveResult:
    """Psi_D(G) = min |S| - |D| over DRSs S containing D."""
    _need_pairs(dm)
    D = vertex_set(D)
    if D and (D[0] < 0 or D[-1] >= dm.n):
        raise PreconditionError(f"D contains ids outside 0..{dm.n - 1}")
    t0 = time.perf_counter()
    search = _SubsetSearch(dm, _batch_drs, work_limit, threads, batch_size)
    fixed = set(D)
    pool = [v for v in range(dm.n) if v not in fixed]
    for t in range(len(pool) + 1):
        if len(D) + t < 2:
            continue
        hit = search.first(pool, t, D)
        if hit is not None:
            if not is_d_drs(dm, hit, D):
                raise VerificationError(f"witness {hit} is not a D-DRS for D={D}")
            return SolveResult(t, hit, SolveMethod.EXHAUSTIVE, time.perf_counter() - t0, D, search.checked)
    raise VerificationError("the full vertex set was not accepted as a DRS")


def psi_d_clique(n: int, d: int) -> int:
    """Psi_D(K_n) for |D| = d."""
    if n < 2 or not 0 <= d <= n:
        raise PreconditionError(f"need n >= 2 and 0 <= d <= n, got n={n}, d={d}")
    if n == 2 or d == n:
        return n - d
    return n - 1 - d


def _clique_witness(block: VertexSet, cuts: VertexSet) -> VertexSet:
    """R_i plus the lowest-id non-cut vertices, up to the size the clique formula asks for."""
    size = psi_d_clique(len(block), len(cuts)) + len(cuts)
    cut_set = set(cuts)
    free = [v for v in block if v not in cut_set]
    return vertex_set(list(cuts) + free[: size - len(cuts)])


def min_drs_decomposed(
    g: Graph,
    *,
    work_limit: int | None = None,
    threads: int = 1,
    batch_size: int | None = None,
) -> SolveResult:
    """
    Psi(G) as the sum of Psi_{R_i}(G_i) over the blocks G_i:
      - clique blocks use the closed form,
      - other blocks are searched exhaustively on their own distance matrix,
      - S is the union of the S_i minus the cut vertices, re-verified on the whole graph.
    A 2-connected graph is a single block and goes straight to the exhaustive search.
    """
    if g.n < 2:
        raise PreconditionError("decomposition needs at least two vertices")
    require_connected(g)
    t0 = time.perf_counter()
    dm = bfs_all_pairs(g)
    dec = blocks_and_cut_vertices(g)

    if len(dec.blocks) == 1:
        log.info("graph is 2-connected; falling back to exhaustive search")
        res = min_drs_exhaustive(dm, work_limit=work_limit, threads=threads, batch_size=batch_size)
        return SolveResult(res.psi, res.witness, SolveMethod.EXHAUSTIVE, time.perf_counter() - t0, checked=res.checked)

    chosen: set[int] = set()
    checked = 0
    for i, block in enumerate(dec.blocks):
        cuts = dec.cuts_in(i)
        sub, host = induced_subgraph(g, block)
        k = sub.n
        if sub.m == k * (k - 1) // 2:
            s_i = _clique_witness(block, cuts)
        else:
            local = {v: j for j, v in enumerate(host)}
            res = min_d_drs_exhaustive(
                bfs_all_pairs(sub), [local[r] for r in cuts],
                work_limit=None if work_limit is None else max(0, work_limit - checked),
                threads=threads, batch_size=batch_size,
            )
            checked += res.checked
            s_i = tuple(host[j] for j in res.witness)
        chosen.update(set(s_i) - set(cuts))

    witness = vertex_set(chosen)
    if not is_drs_fast(dm, witness):
        raise VerificationError(
            f"decomposed witness {witness} is not a DRS of the whole graph (non-isometric block?)"
        )
    log.info("%d blocks, %d cut vertices, Psi=%d", len(dec.blocks), len(dec.cut_vertices), len(witness))
    return SolveResult(len(witness), witness, SolveMethod.DECOMPOSITION, time.perf_counter() - t0, checked=checked)


def metric_dimension_exhaustive(
    dm: DistanceMatrix,
    *,
    work_limit: int | None = None,
    threads: int = 1,
    batch_size: int | None = None,
) -> SolveResult:
    """mu(G): smallest resolving set, same enumeration order as the DRS search."""
    _need_pairs(dm)
    t0 = time.perf_counter()
    search = _SubsetSearch(dm, _batch_resolving, work_limit, threads, batch_size)
    for k in range(1, dm.n + 1):
        hit = search.first(range(dm.n), k)
        if hit is not None:
            if not is_resolving_set(dm, hit):
                raise VerificationError(f"witness {hit} is not a resolving set")
            return SolveResult(k, hit, SolveMethod.EXHAUSTIVE, time.perf_counter() - t0, checked=search.checked)
    raise VerificationError("the full vertex set was not accepted as a resolving set")
