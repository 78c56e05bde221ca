# core/families.py
"""
Graph families used as test corpora and tightness examples.

- path / cycle / star / complete on n vertices
- A_k: u, v1..vk, w0..w{m-1}, w'0..w'{m-1} with m = ceil(log2(1+k)); v_j ~ w_i iff bit i of j is 0
- T_k: k triangles glued at u
- seeded random trees (Pruefer) and random connected graphs (tree plus extra edges)
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum

import networkx as nx

from .constants import GOLDEN_GAMMA, MASK64
from .errors import PreconditionError
from .graph_core import Graph

log = logging.getLogger(__name__)


# ---- PRNG ------------------------------------------------------------------

class SplitMix64:
    """splitmix64: reproducible across languages for a given seed."""

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection sampling."""
        if bound < 1:
            raise PreconditionError(f"bound must be positive, got {bound}")
        limit = ((1 << 64) // bound) * bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


# ---- Family spec -------------------------------------------------------------

class FamilyKind(str, Enum):
    PATH = "path"
    CYCLE = "cycle"
    STAR = "star"
    COMPLETE = "complete"
    AK = "ak"
    TK = "tk"
    RANDOM_TREE = "random_tree"
    RANDOM_CONNECTED = "random_connected"


_PARAM_NAMES = {
    FamilyKind.PATH: ("n",),
    FamilyKind.CYCLE: ("n",),
    FamilyKind.STAR: ("n",),
    FamilyKind.COMPLETE: ("n",),
    FamilyKind.AK: ("k",),
    FamilyKind.TK: ("k",),
    FamilyKind.RANDOM_TREE: ("n", "seed"),
    FamilyKind.RANDOM_CONNECTED: ("n", "extra", "seed"),
}


@dataclass(frozen=True)
class FamilySpec:
    kind: FamilyKind
    params: tuple[int, ...]

    @classmethod
    def parse(cls, kind: str | FamilyKind, **params: int) -> "FamilySpec":
        try:
            kind = FamilyKind(kind)
        except ValueError:
            raise PreconditionError(
                f"unknown family {kind!r}; expected one of {', '.join(k.value for k in FamilyKind)}"
            ) from None
        names = _PARAM_NAMES[kind]
        missing = [p for p in names if params.get(p) is None]
        if missing:
            raise PreconditionError(f"family {kind.value} needs {', '.join(missing)}")
        spec = cls(kind, tuple(int(params[p]) for p in names))
        spec.validate()
        return spec

    def validate(self) -> None:
        kind, p = self.kind, self.params
        if kind == FamilyKind.AK and p[0] < 2:
            raise PreconditionError(f"A_k needs k >= 2, got {p[0]}")
        if kind == FamilyKind.TK and p[0] < 1:
            raise PreconditionError(f"T_k needs k >= 1, got {p[0]}")
        if kind not in (FamilyKind.AK, FamilyKind.TK):
            n = p[0]
            need = 3 if kind == FamilyKind.CYCLE else 2
            if n < need:
                raise PreconditionError(f"{kind.value} needs n >= {need}, got {n}")
        if kind == FamilyKind.RANDOM_CONNECTED:
            n, extra = p[0], p[1]
            room = n * (n - 1) // 2 - (n - 1)
            if not 0 <= extra <= room:
                raise PreconditionError(f"extra must be in 0..{room} for n={n}, got {extra}")

    def build(self) -> Graph:
        kind, p = self.kind, self.params
        if kind == FamilyKind.AK:
            return gen_ak(p[0])
        if kind == FamilyKind.TK:
            return gen_tk(p[0])
        if kind == FamilyKind.RANDOM_TREE:
            return gen_random_tree(p[0], p[1])
        if kind == FamilyKind.RANDOM_CONNECTED:
            return gen_random_connected(p[0], p[1], p[2])
        return gen_basic(kind, p[0])

    def describe(self) -> str:
        names = _PARAM_NAMES[self.kind]
        return f"{self.kind.value} " + " ".join(f"{k}={v}" for k, v in zip(names, self.params))


# ---- Deterministic families ---------------------------------------------------

def gen_basic(kind: str | FamilyKind, n: int) -> Graph:
    kind = FamilyKind(kind)
    if kind == FamilyKind.PATH:
        edges = [(i, i + 1) for i in range(n - 1)]
        need = 2
    elif kind == FamilyKind.CYCLE:
        edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
        need = 3
    elif kind == FamilyKind.STAR:
        edges = [(0, i) for i in range(1, n)]
        need = 2
    elif kind == FamilyKind.COMPLETE:
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
        need = 2
    else:
        raise PreconditionError(f"{kind.value} is not a basic family")
    if n < need:
        raise PreconditionError(f"{kind.value} needs n >= {need}, got {n}")
    return Graph(n, tuple(edges))


def ak_m(k: int) -> int:
    """m = ceil(log2(1 + k))."""
    return int(k).bit_length()


def gen_ak(k: int) -> Graph:
    if k < 2:
        raise PreconditionError(f"A_k needs k >= 2, got {k}")
    m = ak_m(k)
    w = lambda i: 1 + k + i          # noqa: E731
    wp = lambda i: 1 + k + m + i     # noqa: E731
    edges = [(0, j) for j in range(1, k + 1)]
    edges += [(j, w(i)) for j in range(1, k + 1) for i in range(m) if not (j >> i) & 1]
    edges += [(w(i), wp(i)) for i in range(m)]
    labels = ["u"] + [f"v{j}" for j in range(1, k + 1)] + [f"w{i}" for i in range(m)] + [f"w'{i}" for i in range(m)]
    return Graph(1 + k + 2 * m, tuple(edges), tuple(labels))


def gen_tk(k: int) -> Graph:
    if k < 1:
        raise PreconditionError(f"T_k needs k >= 1, got {k}")
    edges = []
    labels = ["u"]
    for i in range(1, k + 1):
        x, y = 2 * i - 1, 2 * i
        edges += [(0, x), (0, y), (x, y)]
        labels += [f"x{i}", f"y{i}"]
    return Graph(2 * k + 1, tuple(edges), tuple(labels))


# ---- Random families -----------------------------------------------------------

def _random_tree_edges(n: int, rng: SplitMix64) -> list[tuple[int, int]]:
    if n == 2:
        return [(0, 1)]
    seq = [rng.below(n) for _ in range(n - 2)]
    T = nx.from_prufer_sequence(seq)
    return [(min(u, v), max(u, v)) for u, v in T.edges()]


def gen_random_tree(n: int, seed: int) -> Graph:
    if n < 2:
        raise PreconditionError(f"random tree needs n >= 2, got {n}")
    return Graph(n, tuple(_random_tree_edges(n, SplitMix64(seed))))


def gen_random_connected(n: int, extra: int, seed: int) -> Graph:
    """Random tree plus `extra` non-tree edges (partial Fisher-Yates over the sorted complement)."""
    FamilySpec(FamilyKind.RANDOM_CONNECTED, (n, extra, seed)).validate()
    rng = SplitMix64(seed)
    tree = _random_tree_edges(n, rng)
    present = set(tree)
    pool = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in present]
    for i in range(extra):
        j = i + rng.below(len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
    return Graph(n, tuple(tree + pool[:extra]))


# ---- A_k edge descriptors and closed-form distances ------------------------------

@dataclass(frozen=True)
class AkEdge:
    form: str          # "ww" (w_i w'_i), "wv" (w_i v_j) or "uv" (u v_j)
    i: int | None = None
    j: int | None = None


_AK_LABEL = re.compile(r"^(u|v(\d+)|w(\d+)|w'(\d+))$")


def _ak_vertex(k: int, label: str) -> tuple[str, int | None]:
    match = _AK_LABEL.match(label)
    if not match:
        raise PreconditionError(f"{label!r} is not an A_k vertex label")
    if label == "u":
        return "u", None
    if match.group(2) is not None:
        j = int(match.group(2))
        if not 1 <= j <= k:
            raise PreconditionError(f"v{j} out of range for k={k}")
        return "v", j
    i = int(match.group(3) if match.group(3) is not None else match.group(4))
    if not 0 <= i < ak_m(k):
        raise PreconditionError(f"index {i} out of range for k={k}")
    return ("w" if match.group(3) is not None else "w'"), i


def ak_edge(k: int, label_a: str, label_b: str) -> AkEdge:
    """Descriptor for the A_k edge between two labelled vertices (either order)."""
    (ka, xa), (kb, xb) = sorted([_ak_vertex(k, label_a), _ak_vertex(k, label_b)], key=lambda t: t[0])
    pair = (ka, kb)
    if pair == ("w", "w'") and xa == xb:
        return AkEdge("ww", i=xa)
    if pair == ("v", "w") and not (xa >> xb) & 1:
        return AkEdge("wv", i=xb, j=xa)
    if pair == ("u", "v"):
        return AkEdge("uv", j=xb)
    raise PreconditionError(f"{label_a}-{label_b} is not an edge of A_{k}")


def ak_edge_labels(e: AkEdge) -> tuple[str, str]:
    if e.form == "ww":
        return f"w{e.i}", f"w'{e.i}"
    if e.form == "wv":
        return f"v{e.j}", f"w{e.i}"
    return "u", f"v{e.j}"


def _w_adjacent(i: int, j: int) -> bool:
    return not (j >> i) & 1


def _share_v(k: int, i: int, i2: int) -> bool:
    return any(_w_adjacent(i, j) and _w_adjacent(i2, j) for j in range(1, k + 1))


def ak_predicted_distance(k: int, e1: AkEdge, e2: AkEdge) -> int:
    """d_{L(A_k)}(e1, e2) for e1 = w_i w'_i, from the closed-form case analysis."""
    if k < 2:
        raise PreconditionError(f"A_k needs k >= 2, got {k}")
    if e1.form != "ww":
        raise PreconditionError("left edge must be of the form w_i w'_i")
    i = e1.i
    if e2.form == "ww":
        if e2.i == i:
            return 0
        return 3 if _share_v(k, i, e2.i) else 5
    if e2.form == "wv":
        if e2.i == i:
            return 1
        if _w_adjacent(i, e2.j):
            return 2
        return 3 if _share_v(k, i, e2.i) else 4
    if e2.form == "uv":
        return 2 if _w_adjacent(i, e2.j) else 3
    raise PreconditionError(f"unsupported edge form {e2.form!r}")


def ak_edges(k: int) -> list[AkEdge]:
    """Every edge of A_k as a descriptor, in the order gen_ak lists edge ids."""
    g = gen_ak(k)
    return [ak_edge(k, g.label_of(u), g.label_of(v)) for u, v in g.edges]


def ak_line_vertex(g: Graph, e: AkEdge) -> int:
    """Line-vertex id of an A_k edge descriptor in L(g) for g = gen_ak(k)."""
    a, b = ak_edge_labels(e)
    return g.edge_id(g.vertex_of_label(a), g.vertex_of_label(b))


def example_tree() -> Graph:
    """13-vertex example tree v1..v13: sigma=6, ex=3 (v2, v3, v4), ex'=2 (v2, v3)."""
    pairs = [(1, 2), (1, 3), (1, 4), (2, 5), (2, 6), (3, 7), (3, 8),
             (4, 9), (4, 10), (8, 11), (9, 12), (10, 13)]
    return Graph(13, tuple((a - 1, b - 1) for a, b in pairs), tuple(f"v{i}" for i in range(1, 14)))
