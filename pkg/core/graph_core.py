# core/graph_core.py
"""
Graph substrate shared by every other module.

- Graph: simple undirected graph on dense ids 0..n-1 with optional labels.
- DistanceMatrix: all-pairs hop distances, materialised once per graph.
- Line graphs, block / cut-vertex decomposition, spanning trees.
- The plain-text graph file format (header `g <n> <m>`, edge lines, `l` label lines).
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .errors import DisconnectedGraphError, GraphFormatError, PreconditionError

log = logging.getLogger(__name__)

# Sorted, duplicate-free tuple of vertex ids.
VertexSet = tuple[int, ...]


def vertex_set(vertices: Iterable[int]) -> VertexSet:
    return tuple(sorted({int(v) for v in vertices}))


# ---- Types -----------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    n: int                                       # vertex count
    edges: tuple[tuple[int, int], ...] = ()      # (u, v) with u < v, sorted
    labels: tuple[str, ...] | None = None        # None = decimal ids

    def __post_init__(self):
        if int(self.n) < 1:
            raise PreconditionError("a graph needs at least one vertex")
        object.__setattr__(self, "n", int(self.n))

        arr = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if arr.size:
            if (arr[:, 0] == arr[:, 1]).any():
                v = int(arr[arr[:, 0] == arr[:, 1]][0, 0])
                raise PreconditionError(f"self-loop at vertex {v}")
            arr = np.sort(arr, axis=1)
            if arr.min() < 0 or arr.max() >= self.n:
                bad = arr[(arr < 0).any(axis=1) | (arr >= self.n).any(axis=1)][0]
                raise PreconditionError(f"edge ({bad[0]}, {bad[1]}) out of range for n={self.n}")
            arr = arr[np.lexsort((arr[:, 1], arr[:, 0]))]
            dup = (np.diff(arr, axis=0) == 0).all(axis=1)
            if dup.any():
                u, v = arr[int(np.argmax(dup))]
                raise PreconditionError(f"duplicate edge ({u}, {v})")
        arr.setflags(write=False)
        object.__setattr__(self, "edges", tuple(map(tuple, arr.tolist())))
        object.__setattr__(self, "_edge_array", arr)

        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise PreconditionError(f"expected {self.n} labels, got {len(labels)}")
            for x in labels:
                if not x or any(ch.isspace() for ch in x):
                    raise PreconditionError(f"label {x!r} must be a non-empty token without whitespace")
            if len(set(labels)) != len(labels):
                raise PreconditionError("labels must be unique")
            if all(x == str(v) for v, x in enumerate(labels)):
                labels = None
            object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_array(self) -> np.ndarray:
        """(m, 2) read-only int64 view of `edges`."""
        return self._edge_array

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, neighbour ids, incident edge ids), neighbours ascending per vertex."""
        arr = self.edge_array
        eids = np.arange(self.m, dtype=np.int64)
        src = np.concatenate([arr[:, 0], arr[:, 1]])
        dst = np.concatenate([arr[:, 1], arr[:, 0]])
        inc = np.concatenate([eids, eids])
        order = np.lexsort((dst, src))
        counts = np.bincount(src, minlength=self.n)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return indptr, dst[order], inc[order]

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.diff(self._csr[0])
        deg.setflags(write=False)
        return deg

    @cached_property
    def adjacency(self) -> list[list[int]]:
        indptr, nbrs, _ = self._csr
        flat = nbrs.tolist()
        bounds = indptr.tolist()
        return [flat[bounds[v]:bounds[v + 1]] for v in range(self.n)]

    def neighbors(self, v: int) -> list[int]:
        return self.adjacency[v]

    def incident_edges(self, v: int) -> list[int]:
        """Edge ids at v, ordered by the other endpoint."""
        indptr, _, inc = self._csr
        return inc[indptr[v]:indptr[v + 1]].tolist()

    @cached_property
    def _edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self._edge_index[key]
        except KeyError:
            raise PreconditionError(f"({u}, {v}) is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._edge_index

    def label_of(self, v: int) -> str:
        return str(v) if self.labels is None else self.labels[v]

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {self.label_of(v): v for v in range(self.n)}

    def vertex_of_label(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise PreconditionError(f"no vertex labelled {label!r}") from None

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    n: int
    d: np.ndarray          # n x n hop counts, read-only

    def __post_init__(self):
        if self.d.shape != (self.n, self.n):
            raise PreconditionError(f"distance matrix must be {self.n}x{self.n}, got {self.d.shape}")
        self.d.setflags(write=False)

    @cached_property
    def diameter(self) -> int:
        return int(self.d.max()) if self.n else 0

    def __call__(self, u: int, v: int) -> int:
        return int(self.d[u, v])


@dataclass(frozen=True)
class LineGraphMap:
    pairs: tuple[tuple[int, int], ...]     # line vertex i -> root edge (u, v), u < v

    @cached_property
    def _inverse(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.pairs)}

    def root_edge(self, i: int) -> tuple[int, int]:
        return self.pairs[i]

    def line_vertex(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self._inverse[key]
        except KeyError:
            raise PreconditionError(f"({u}, {v}) is not a root edge") from None


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[VertexSet, ...]
    cut_vertices: VertexSet

    def cuts_in(self, i: int) -> VertexSet:
        """R_i: cut vertices lying in block i."""
        cuts = set(self.cut_vertices)
        return tuple(v for v in self.blocks[i] if v in cuts)


# ---- File format -----------------------------------------------------------

def parse_graph(text: str | bytes) -> Graph:
    """
    Parse the graph file format:
        # comment
        g <n> <m>
        <u> <v>          (m lines)
        l <v> <label>    (optional)
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")

    n = m = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    labels: dict[int, str] = {}
    lineno = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "g" or len(parts) != 3:
                raise GraphFormatError(lineno, f"expected header 'g <n> <m>', got {line!r}")
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(lineno, f"non-integer header fields in {line!r}") from None
            if n < 1 or m < 0:
                raise GraphFormatError(lineno, f"bad header sizes n={n}, m={m}")
            continue
        if parts[0] == "l":
            if len(parts) != 3:
                raise GraphFormatError(lineno, f"expected 'l <v> <label>', got {line!r}")
            v = _parse_vertex(parts[1], n, lineno)
            if v in labels:
                raise GraphFormatError(lineno, f"vertex {v} labelled twice")
            labels[v] = parts[2]
            continue
        if len(parts) != 2:
            raise GraphFormatError(lineno, f"expected an edge '<u> <v>', got {line!r}")
        u, v = (_parse_vertex(p, n, lineno) for p in parts)
        if u == v:
            raise GraphFormatError(lineno, f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(lineno, f"duplicate edge {key[0]} {key[1]}")
        seen.add(key)
        edges.append(key)

    if n is None:
        raise GraphFormatError(lineno, "missing header 'g <n> <m>'")
    if len(edges) != m:
        raise GraphFormatError(lineno, f"header announces {m} edges, found {len(edges)}")

    label_tuple = None
    if labels:
        label_tuple = tuple(labels.get(v, str(v)) for v in range(n))
        if len(set(label_tuple)) != n:
            raise GraphFormatError(lineno, "labels must be unique")
    return Graph(n, tuple(edges), label_tuple)


def _parse_vertex(token: str, n: int, lineno: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise GraphFormatError(lineno, f"vertex id {token!r} is not an integer") from None
    if not 0 <= v < n:
        raise GraphFormatError(lineno, f"vertex id {v} out of range 0..{n - 1}")
    return v


def write_graph(g: Graph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"g {g.n} {g.m}")
    out.extend(f"{u} {v}" for u, v in g.edges)
    if g.labels is not None:
        out.extend(f"l {v} {x}" for v, x in enumerate(g.labels) if x != str(v))
    return "\n".join(out) + "\n"


# ---- Connectivity and distances -------------------------------------------

def _unreachable_pair(g: Graph) -> tuple[int, int] | None:
    seen = bytearray(g.n)
    seen[0] = 1
    queue = deque([0])
    adj = g.adjacency
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = 1
                queue.append(y)
    missing = seen.find(0)
    return None if missing < 0 else (0, missing)


def is_connected(g: Graph) -> bool:
    return _unreachable_pair(g) is None


def require_connected(g: Graph, what: str = "graph") -> None:
    pair = _unreachable_pair(g)
    if pair is not None:
        raise DisconnectedGraphError(*pair, what=what)


def bfs_all_pairs(g: Graph) -> DistanceMatrix:
    """Exact hop distances for a connected graph, one BFS per source."""
    require_connected(g)
    d = np.zeros((g.n, g.n), dtype=np.int32)
    for src, lengths in nx.all_pairs_shortest_path_length(g.to_networkx()):
        row = d[src]
        for dst, k in lengths.items():
            row[dst] = k
    return DistanceMatrix(g.n, d)


def max_degree(g: Graph) -> int:
    return int(g.degrees.max()) if g.n else 0


# ---- Derived graphs ---------------------------------------------------------

def line_graph(g: Graph) -> tuple[Graph, LineGraphMap]:
    """L(g): one vertex per edge of g (same order), adjacent iff the edges share an endpoint."""
    if g.m == 0:
        raise PreconditionError("line graph of an edgeless graph is empty")
    line_edges: list[tuple[int, int]] = []
    for v in range(g.n):
        inc = g.incident_edges(v)
        for i, a in enumerate(inc):
            for b in inc[i + 1:]:
                line_edges.append((a, b) if a < b else (b, a))
    labels = tuple(f"{g.label_of(u)}_{g.label_of(v)}" for u, v in g.edges)
    return Graph(g.m, tuple(line_edges), labels), LineGraphMap(g.edges)


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, VertexSet]:
    """Subgraph on `vertices`, relabelled 0..k-1 in ascending host order; returns it with the host ids."""
    host = vertex_set(vertices)
    local = {v: i for i, v in enumerate(host)}
    edges = tuple(
        (local[u], local[v]) for u, v in g.edges if u in local and v in local
    )
    labels = tuple(g.label_of(v) for v in host)
    return Graph(len(host), edges, labels), host


def blocks_and_cut_vertices(g: Graph) -> BlockDecomposition:
    require_connected(g)
    if g.n == 1:
        return BlockDecomposition(((0,),), ())
    G = g.to_networkx()
    blocks = sorted(vertex_set(b) for b in nx.biconnected_components(G))
    cuts = vertex_set(nx.articulation_points(G))
    log.debug("%d blocks, %d cut vertices", len(blocks), len(cuts))
    return BlockDecomposition(tuple(blocks), cuts)


def is_tree(g: Graph) -> bool:
    return g.m == g.n - 1 and is_connected(g)


def _contains_k4_minus(g: Graph) -> bool:
    return g.n == 4 and g.m >= 5


def spanning_tree_upper(g: Graph) -> VertexSet:
    """
    Edge ids of the spanning tree used for the |V|-1 upper bound.
    - 4 vertices and at least 5 edges (K4 or K4 minus an edge): the star at the
      lowest-id degree-3 vertex, never a P4.
    - otherwise: BFS tree from vertex 0, neighbours in ascending id.
    """
    if g.n < 2:
        raise PreconditionError("spanning tree needs at least two vertices")
    require_connected(g)

    if _contains_k4_minus(g):
        center = int(np.flatnonzero(g.degrees == 3)[0])
        return vertex_set(g.incident_edges(center))

    tree: list[int] = []
    seen = bytearray(g.n)
    seen[0] = 1
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y, e in zip(g.neighbors(x), g.incident_edges(x)):
            if not seen[y]:
                seen[y] = 1
                tree.append(e)
                queue.append(y)
    return vertex_set(tree)
