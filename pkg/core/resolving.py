# core/resolving.py
"""
Verification predicates over a DistanceMatrix.

is_drs_fast is the verifier used everywhere; is_drs_naive is kept as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .graph_core import DistanceMatrix, vertex_set


@dataclass(frozen=True)
class FVector:
    anchor: int                  # u1 = smallest id in S
    deltas: tuple[int, ...]      # d(x, u_j) - d(x, u1), j = 2..|S|


def doubly_resolves(dm: DistanceMatrix, x: int, y: int, u: int, v: int) -> bool:
    """{x, y} doubly resolves {u, v}."""
    d = dm.d
    return int(d[u, x]) - int(d[u, y]) != int(d[v, x]) - int(d[v, y])


def _rows_distinct(block: np.ndarray) -> bool:
    return np.unique(block, axis=0).shape[0] == block.shape[0]


def is_resolving_set(dm: DistanceMatrix, S: Sequence[int]) -> bool:
    S = vertex_set(S)
    if not S:
        return dm.n <= 1
    return _rows_distinct(dm.d[:, list(S)])


def is_drs_naive(dm: DistanceMatrix, S: Sequence[int]) -> bool:
    S = vertex_set(S)
    if dm.n <= 1:
        return True
    if len(S) < 2:
        return False
    pairs = list(combinations(S, 2))
    for u, v in combinations(range(dm.n), 2):
        if not any(doubly_resolves(dm, x, y, u, v) for x, y in pairs):
            return False
    return True


def f_vector(dm: DistanceMatrix, S: Sequence[int], x: int) -> FVector:
    S = vertex_set(S)
    if len(S) < 2:
        raise PreconditionError("F-vector needs at least two vertices in S")
    row = dm.d[x]
    anchor = S[0]
    return FVector(anchor, tuple(int(row[u]) - int(row[anchor]) for u in S[1:]))


def f_matrix(dm: DistanceMatrix, S: Sequence[int]) -> np.ndarray:
    """All n F-vectors for S as an (n, |S|-1) array."""
    S = vertex_set(S)
    cols = dm.d[:, list(S)].astype(np.int64)
    return cols[:, 1:] - cols[:, :1]


def is_drs_fast(dm: DistanceMatrix, S: Sequence[int]) -> bool:
    """S is a DRS iff the n F-vectors are pairwise distinct."""
    S = vertex_set(S)
    if dm.n <= 1:
        return True
    if len(S) < 2:
        return False
    return _rows_distinct(f_matrix(dm, S))


def is_d_drs(dm: DistanceMatrix, S: Sequence[int], D: Sequence[int]) -> bool:
    return set(D) <= set(S) and is_drs_fast(dm, S)


def doubly_resolving_pair(dm: DistanceMatrix, S: Sequence[int], u: int, v: int) -> tuple[int, int] | None:
    S = vertex_set(S)
    for x, y in combinations(S, 2):
        if doubly_resolves(dm, x, y, u, v):
            return x, y
    return None


def first_unresolved_pair(dm: DistanceMatrix, S: Sequence[int]) -> tuple[int, int] | None:
    """Lowest pair {u, v} whose F-vectors coincide, or None when S is a DRS."""
    S = vertex_set(S)
    if dm.n <= 1:
        return None
    if len(S) < 2:
        return (0, 1)
    seen: dict[bytes, int] = {}
    for x, row in enumerate(f_matrix(dm, S)):
        key = row.tobytes()
        if key in seen:
            return seen[key], x
        seen[key] = x
    return None


def is_doubly_distance_resolving_on(dm: DistanceMatrix, S: Sequence[int], x: int) -> bool:
    """
    Every pair {u, v} with d(u, x) != d(v, x) is doubly resolved by a pair from S + {x}.

    Two vertices are doubly resolved by some pair of T = S + {x} exactly when their
    F-vectors over T differ, so the check groups vertices by F-vector and requires a
    single distance to x inside each group.
    """
    T = vertex_set(set(S) | {x})
    to_x = dm.d[:, x]
    if len(T) == 1:
        return bool((to_x == to_x[0]).all())
    groups: dict[bytes, int] = {}
    for v, row in enumerate(f_matrix(dm, T)):
        key = row.tobytes()
        dist = int(to_x[v])
        if groups.setdefault(key, dist) != dist:
            return False
    return True
