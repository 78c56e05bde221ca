# core/tree_line.py
"""
Bounds for Psi(L(G)) and the exact linear-time answer for line graphs of trees.

Tree functions work on degree arrays and adjacency lists only; no distance matrix is
built unless a function says it verifies on L(g).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .errors import PreconditionError, VerificationError
from .graph_core import (
    BlockDecomposition,
    Graph,
    VertexSet,
    bfs_all_pairs,
    is_tree,
    line_graph,
    max_degree,
    require_connected,
    spanning_tree_upper,
    vertex_set,
)
from .resolving import is_drs_fast

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TreeStats:
    n: int
    leaves: VertexSet
    majors: VertexSet                   # degree >= 3
    exterior_majors: VertexSet          # majors with a terminal vertex
    strong_exterior_majors: VertexSet   # majors with a leaf neighbour
    terminal_of: Dict[int, int | None] = field(default_factory=dict)   # leaf -> major, None on a path

    @property
    def sigma(self) -> int:
        return len(self.leaves)

    @property
    def ex(self) -> int:
        return len(self.exterior_majors)

    @property
    def ex_prime(self) -> int:
        return len(self.strong_exterior_majors)

    @property
    def is_path(self) -> bool:
        return not self.majors

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "ex": self.ex, "ex_prime": self.ex_prime}


def _require_tree(t: Graph, min_n: int) -> None:
    if t.n < min_n:
        raise PreconditionError(f"tree needs at least {min_n} vertices, got {t.n}")
    if not is_tree(t):
        raise PreconditionError(f"input is not a tree (n={t.n}, m={t.m})")


def _leaf_edges(t: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(edge ids, leaf end, other end) of every pendant edge; assumes n >= 3."""
    arr = t.edge_array
    deg = t.degrees
    a_leaf = deg[arr[:, 0]] == 1
    b_leaf = deg[arr[:, 1]] == 1
    eids = np.flatnonzero(a_leaf | b_leaf)
    a_leaf = a_leaf[eids]
    leaf = np.where(a_leaf, arr[eids, 0], arr[eids, 1])
    other = np.where(a_leaf, arr[eids, 1], arr[eids, 0])
    return eids, leaf, other


def _terminal_major(t: Graph, leaf: int) -> int | None:
    """Walk from a leaf through degree-2 vertices to the first major, None if the walk ends in a leaf."""
    deg = t.degrees
    prev, cur = leaf, t.neighbors(leaf)[0]
    while deg[cur] == 2:
        a, b = t.neighbors(cur)
        prev, cur = cur, (b if a == prev else a)
    return int(cur) if deg[cur] >= 3 else None


def tree_stats(t: Graph) -> TreeStats:
    _require_tree(t, 2)
    deg = t.degrees
    leaves = vertex_set(np.flatnonzero(deg == 1).tolist())
    majors = vertex_set(np.flatnonzero(deg >= 3).tolist())

    if t.n >= 3:
        _, _, other = _leaf_edges(t)
        strong = vertex_set(np.unique(other[deg[other] >= 3]).tolist())
    else:
        strong = ()

    terminal_of = {leaf: _terminal_major(t, leaf) for leaf in leaves}
    exterior = vertex_set(v for v in terminal_of.values() if v is not None)
    return TreeStats(t.n, leaves, majors, exterior, strong, terminal_of)


def psi_line_tree_formula(stats: TreeStats) -> int:
    """Psi(L(T)) = sigma - ex'."""
    if stats.n < 3:
        raise PreconditionError("L(T) has fewer than two vertices when n < 3")
    return stats.sigma - stats.ex_prime


def construct_min_drs_line_tree(t: Graph) -> VertexSet:
    """
    Minimum DRS of L(t) as edge ids of t:
    every pendant edge except, at each strong exterior major, the one to its smallest leaf.
    """
    _require_tree(t, 3)
    eids, leaf, other = _leaf_edges(t)
    keep = np.ones(eids.size, dtype=bool)

    at_major = np.flatnonzero(t.degrees[other] >= 3)
    if at_major.size:
        order = at_major[np.lexsort((leaf[at_major], other[at_major]))]
        first = np.ones(order.size, dtype=bool)
        first[1:] = other[order][1:] != other[order][:-1]
        keep[order[first]] = False

    S = vertex_set(eids[keep].tolist())
    log.debug("tree n=%d: %d pendant edges, %d kept", t.n, eids.size, len(S))
    return S


def lower_bound_line(g: Graph) -> int:
    """ceil(log2(1 + Delta)) in integer arithmetic."""
    if g.n < 3:
        raise PreconditionError("bounds need at least three vertices")
    require_connected(g)
    return max_degree(g).bit_length()


def upper_bound_drs_line(g: Graph) -> VertexSet:
    """Spanning-tree edges of g as a DRS of L(g) of size n - 1, verified on L(g)."""
    if g.n < 3:
        raise PreconditionError("bounds need at least three vertices")
    S = spanning_tree_upper(g)
    lg, _ = line_graph(g)
    if not is_drs_fast(bfs_all_pairs(lg), S):
        raise VerificationError(f"spanning tree {S} is not a DRS of L(g)")
    return S


def mu_tree_formula(stats: TreeStats) -> int:
    if stats.n < 2:
        raise PreconditionError("metric dimension needs at least two vertices")
    return 1 if stats.is_path else stats.sigma - stats.ex


def drs_of_tree(t: Graph) -> VertexSet:
    """The leaves: a minimum DRS of the tree itself."""
    _require_tree(t, 2)
    return vertex_set(np.flatnonzero(t.degrees == 1).tolist())


def predicted_line_blocks(t: Graph) -> BlockDecomposition:
    """
    Blocks and cut vertices of L(t) read off t directly:
    cut vertices are the edges with no leaf end, blocks are the edge stars E_u of non-leaves.
    """
    _require_tree(t, 3)
    deg = t.degrees
    arr = t.edge_array
    cuts = vertex_set(np.flatnonzero((deg[arr[:, 0]] >= 2) & (deg[arr[:, 1]] >= 2)).tolist())
    blocks = sorted(vertex_set(t.incident_edges(u)) for u in np.flatnonzero(deg >= 2).tolist())
    return BlockDecomposition(tuple(blocks), cuts)
