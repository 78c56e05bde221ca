# core/reduction.py
"""
3-dimensional matching instances and the bipartite gadget whose line graph encodes them.

Vertex order of the gadget (part of the file contract):
  I side: s0..s{tau-1}, sA, sB, sC, sD, d'0..d'{lambda-1}
  J side: per copy c: a0.c..a{n-1}.c, b0.c.., c0.c..; then s'0..s'{tau-1}, s'A, s'B, s'C, s'D, d0..d{lambda-1}
Triple t of copy c is s{c*T + t} where T is the number of base triples.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, Optional, Sequence

from .constants import DEFAULT_COPIES, DEFAULT_WORK_LIMIT
from .errors import InstanceFormatError, PreconditionError, WorkLimitExceeded
from .families import SplitMix64
from .graph_core import Graph, VertexSet, vertex_set

log = logging.getLogger(__name__)

Triple = tuple[int, int, int]
Role = tuple[str, Optional[int], Optional[int]]     # (kind, index, copy)

_SELECTORS = ("A", "B", "C", "D")
_ELEMENTS = ("a", "b", "c")


# ---- Instances -----------------------------------------------------------------

@dataclass(frozen=True)
class ThreeDMInstance:
    n: int
    triples: tuple[Triple, ...]

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"3DM needs n >= 1, got {self.n}")
        if not self.triples:
            raise PreconditionError("3DM instance has no triples")
        triples = tuple(tuple(int(x) for x in t) for t in self.triples)
        for t in triples:
            if len(t) != 3 or not all(0 <= x < self.n for x in t):
                raise PreconditionError(f"triple {t} out of range for n={self.n}")
        if len(set(triples)) != len(triples):
            raise PreconditionError("duplicate triple")
        object.__setattr__(self, "triples", triples)

    @property
    def t(self) -> int:
        return len(self.triples)

    def is_matching(self, chosen: Sequence[int]) -> bool:
        """Chosen triple indices cover every element of A, B and C exactly once."""
        if len(chosen) != self.n or len(set(chosen)) != self.n:
            return False
        if not all(0 <= i < self.t for i in chosen):
            return False
        return all(
            len({self.triples[i][axis] for i in chosen}) == self.n for axis in range(3)
        )


def parse_3dm(text: str | bytes) -> ThreeDMInstance:
    """
    3dm <n> <t>
    <a> <b> <c>      (t lines, 0-based)
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    n = t = None
    triples: list[Triple] = []
    seen: set[Triple] = set()
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "3dm" or len(parts) != 3:
                raise InstanceFormatError(lineno, f"expected header '3dm <n> <t>', got {line!r}")
            try:
                n, t = int(parts[1]), int(parts[2])
            except ValueError:
                raise InstanceFormatError(lineno, f"non-integer header fields in {line!r}") from None
            if n < 1 or t < 1:
                raise InstanceFormatError(lineno, f"bad header sizes n={n}, t={t}")
            continue
        if len(parts) != 3:
            raise InstanceFormatError(lineno, f"expected a triple '<a> <b> <c>', got {line!r}")
        try:
            triple = tuple(int(p) for p in parts)
        except ValueError:
            raise InstanceFormatError(lineno, f"non-integer triple {line!r}") from None
        if not all(0 <= x < n for x in triple):
            raise InstanceFormatError(lineno, f"index out of range 0..{n - 1} in {line!r}")
        if triple in seen:
            raise InstanceFormatError(lineno, f"duplicate triple {line!r}")
        seen.add(triple)
        triples.append(triple)
    if n is None:
        raise InstanceFormatError(lineno, "missing header '3dm <n> <t>'")
    if len(triples) != t:
        raise InstanceFormatError(lineno, f"header announces {t} triples, found {len(triples)}")
    return ThreeDMInstance(n, tuple(triples))


def write_3dm(inst: ThreeDMInstance) -> str:
    lines = [f"3dm {inst.n} {inst.t}"] + [f"{a} {b} {c}" for a, b, c in inst.triples]
    return "\n".join(lines) + "\n"


def random_3dm(n: int, t: int, seed: int) -> ThreeDMInstance:
    """Seeded instance with a planted perfect matching; n <= t <= n^3."""
    if n < 1 or not n <= t <= n ** 3:
        raise PreconditionError(f"need 1 <= n <= t <= n^3, got n={n}, t={t}")
    rng = SplitMix64(seed)

    def perm() -> list[int]:
        p = list(range(n))
        for i in range(n - 1, 0, -1):
            j = rng.below(i + 1)
            p[i], p[j] = p[j], p[i]
        return p

    pb, pc = perm(), perm()
    chosen = {(i, pb[i], pc[i]) for i in range(n)}
    while len(chosen) < t:
        chosen.add((rng.below(n), rng.below(n), rng.below(n)))
    return ThreeDMInstance(n, tuple(sorted(chosen)))


# Seven triples on n = 3; the small worked instance.
SAMPLE_INSTANCE = ThreeDMInstance(
    3, ((0, 0, 0), (0, 1, 2), (0, 2, 1), (1, 0, 1), (1, 1, 2), (2, 2, 0), (2, 2, 1))
)
SAMPLE_MATCHING = (0, 4, 6)


def solve_3dm_exhaustive(inst: ThreeDMInstance, work_limit: int | None = None) -> tuple[int, ...] | None:
    """Lexicographically least perfect matching (triple indices), or None."""
    limit = DEFAULT_WORK_LIMIT if work_limit is None else int(work_limit)
    checked = 0
    for chosen in combinations(range(inst.t), inst.n):
        checked += 1
        if checked > limit:
            raise WorkLimitExceeded(limit, checked - 1, inst.n)
        if inst.is_matching(chosen):
            return chosen
    return None


# ---- Gadget --------------------------------------------------------------------

def lambda_of(tau: int) -> int:
    """ceil(log2 tau) for tau >= 1."""
    return (tau - 1).bit_length()


def _role_label(role: Role) -> str:
    kind, index, copy = role
    if kind in _ELEMENTS:
        return f"{kind}{index}.{copy}"
    if index is None:
        return kind
    return f"{kind}{index}"


@dataclass(frozen=True)
class ReductionGraph:
    instance: ThreeDMInstance
    graph: Graph
    roles: tuple[Role, ...]
    N: int
    tau: int
    lam: int
    K: int
    n_prime: int              # n * N; kept for reference only
    i_side: int               # vertices 0..i_side-1 form I, the rest J
    _index: Dict[Role, int] = field(default_factory=dict, repr=False, compare=False)

    def vertex(self, kind: str, index: int | None = None, copy: int | None = None) -> int:
        try:
            return self._index[(kind, index, copy)]
        except KeyError:
            raise PreconditionError(f"no gadget vertex {kind!r} index={index} copy={copy}") from None

    def role(self, v: int) -> Role:
        return self.roles[v]

    @property
    def j_side(self) -> int:
        return self.graph.n - self.i_side

    @cached_property
    def sizes(self) -> dict:
        return {
            "n": self.instance.n, "triples": self.instance.t, "N": self.N,
            "tau": self.tau, "lambda": self.lam, "K": self.K,
            "I": self.i_side, "J": self.j_side,
            "vertices": self.graph.n, "edges": self.graph.m,
        }


def build_reduction(inst: ThreeDMInstance, N: int = DEFAULT_COPIES) -> ReductionGraph:
    if N < 1:
        raise PreconditionError(f"replication N must be >= 1, got {N}")
    n, T = inst.n, inst.t
    tau = N * T
    lam = lambda_of(tau)

    roles: list[Role] = []
    roles += [("s", j, None) for j in range(tau)]
    roles += [(f"s{x}", None, None) for x in _SELECTORS]
    roles += [("d'", i, None) for i in range(lam)]
    i_side = len(roles)
    for c in range(N):
        for kind in _ELEMENTS:
            roles += [(kind, i, c) for i in range(n)]
    roles += [("s'", j, None) for j in range(tau)]
    roles += [(f"s'{x}", None, None) for x in _SELECTORS]
    roles += [("d", i, None) for i in range(lam)]
    index = {r: v for v, r in enumerate(roles)}

    def at(kind, i=None, c=None):
        return index[(kind, i, c)]

    edges: list[tuple[int, int]] = []
    for c in range(N):
        for kind in _ELEMENTS:
            for i in range(n):
                x = at(kind, i, c)
                edges.append((x, at(f"s{kind.upper()}")))    # (1)-(3)
                edges.append((x, at("sD")))                  # (4)
        for t_idx, triple in enumerate(inst.triples):         # (5)
            s = at("s", c * T + t_idx)
            for axis, kind in enumerate(_ELEMENTS):
                edges.append((at(kind, triple[axis], c), s))
    for i in range(lam):
        for j in range(tau):
            if (j >> i) & 1:
                edges.append((at("d", i), at("s", j)))        # (6)
        edges.append((at("d", i), at("sD")))                  # (7)
        edges.append((at("d", i), at("d'", i)))               # (13)
    for j in range(tau):
        edges.append((at("s'", j), at("s", j)))               # (8)
    for x in _SELECTORS:
        edges.append((at(f"s'{x}"), at(f"s{x}")))             # (9)-(12)

    edges = [(min(u, v), max(u, v)) for u, v in edges]
    labels = tuple(_role_label(r) for r in roles)
    g = Graph(len(roles), tuple(edges), labels)
    log.info("gadget: n=%d triples=%d N=%d tau=%d lambda=%d |V|=%d |E|=%d", n, T, N, tau, lam, g.n, g.m)
    return ReductionGraph(inst, g, tuple(roles), N, tau, lam, n + lam + 4, n * N, i_side, index)


def k_threshold(inst: ThreeDMInstance, N: int = DEFAULT_COPIES) -> int:
    """K = n + ceil(log2(N * |triples|)) + 4."""
    if N < 1:
        raise PreconditionError(f"replication N must be >= 1, got {N}")
    return inst.n + lambda_of(N * inst.t) + 4


# ---- Line-vertex sets in L(gadget) ------------------------------------------

def _line(rg: ReductionGraph, a: int, b: int) -> int:
    """Edge id in the gadget, which is the line-vertex id in L(gadget)."""
    return rg.graph.edge_id(a, b)


def sd_line_vertex(rg: ReductionGraph) -> int:
    return _line(rg, rg.vertex("sD"), rg.vertex("s'D"))


def r_prime(rg: ReductionGraph) -> VertexSet:
    """{sA s'A, sB s'B, sC s'C} plus every d_i d'_i."""
    S = [_line(rg, rg.vertex(f"s{x}"), rg.vertex(f"s'{x}")) for x in "ABC"]
    S += [_line(rg, rg.vertex("d", i), rg.vertex("d'", i)) for i in range(rg.lam)]
    return vertex_set(S)


def drs_from_matching(rg: ReductionGraph, matching: Sequence[int]) -> VertexSet:
    """The size-K certificate: the matching's s_j s'_j edges in copy 0, s_D s'_D and R'."""
    matching = tuple(int(i) for i in matching)
    if not rg.instance.is_matching(matching):
        raise PreconditionError(f"triples {matching} are not a perfect 3-dimensional matching")
    S = [_line(rg, rg.vertex("s", j), rg.vertex("s'", j)) for j in matching]
    S.append(sd_line_vertex(rg))
    R = vertex_set(set(S) | set(r_prime(rg)))
    if len(R) != rg.K:
        raise PreconditionError(f"certificate has {len(R)} edges, expected K={rg.K}")
    return R


def edge_distance_class(rg: ReductionGraph, e: tuple[int, int]) -> int:
    """Distance in L(gadget) from edge e to s_D s'_D, read off the endpoint roles."""
    u, v = e
    if not rg.graph.has_edge(u, v):
        raise PreconditionError(f"({u}, {v}) is not a gadget edge")
    kinds = {rg.roles[u][0], rg.roles[v][0]}
    if kinds == {"sD", "s'D"}:
        return 0
    if "sD" in kinds:
        return 1
    if kinds & set(_ELEMENTS) or kinds in ({"d", "d'"}, {"d", "s"}):
        return 2
    return 3
