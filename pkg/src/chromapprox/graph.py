"""Simple undirected graphs: parsing, generators, orderings.

Vertices are 0..n-1.  Edges are canonical (u, v) pairs with u < v and
keep a stable index equal to their position in the edge list; samplers
refer to edges by that index throughout.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

MASK64 = (1 << 64) - 1


def mix_seed(seed: int, salt: int) -> int:
    """Derive an independent substream seed (splitmix64 finalizer).

    Used for worker substreams, random edge orders and generator retry
    attempts so that one user-facing seed yields decorrelated streams.
    """
    z = (seed + 0x9E3779B97F4A7C15 * (salt + 1)) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class GraphError(ValueError):
    """Invalid graph construction or input."""


class GraphParseError(GraphError):
    """Malformed graph text; message names the offending line."""


class GenerationError(GraphError):
    """Random generation failed (e.g. no connected draw within bounds)."""


class Graph:
    """Immutable simple undirected graph."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges):
        if n < 1:
            raise GraphError(f"need at least one vertex, got n={n}")
        canon = []
        seen = set()
        adj = [set() for _ in range(n)]
        for (u, v) in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop edge at vertex {u}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v))
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.edges = tuple(canon)
        self.adj = tuple(frozenset(s) for s in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def is_connected(g: Graph) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == g.n


def girth(g: Graph) -> int | None:
    """Length of a shortest cycle, or None for forests.

    BFS from every vertex; first cross/back edge met at depth d closes a
    cycle of length at most 2d+1, and scanning all sources makes the
    minimum exact.
    """
    best = None
    for src in range(g.n):
        dist = {src: 0}
        parent = {src: -1}
        queue = [src]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            for y in g.adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y and dist[y] >= dist[x]:
                    cyc = dist[x] + dist[y] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best


# ---------------------------------------------------------------------------
# parsing


def parse_edge_list(text: str) -> tuple[Graph, int]:
    """Parse the plain edge-list format.

    First non-comment line is "n m", then one "u v" line per edge
    (0-indexed).  '#' starts a comment; blank lines are skipped.  Loops
    are errors; duplicate edges are collapsed and counted, and the count
    is returned alongside the graph.
    """
    header = None
    edges = []
    seen = set()
    duplicates = 0
    declared_m = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise GraphParseError(f"line {lineno}: expected 'n m' header")
            try:
                n, declared_m = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(f"line {lineno}: non-integer header") from None
            if n < 1 or declared_m < 0:
                raise GraphParseError(f"line {lineno}: invalid header values")
            header = (n, declared_m)
            continue
        if len(parts) != 2:
            raise GraphParseError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"line {lineno}: non-integer vertex id") from None
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"line {lineno}: vertex id out of range 0..{n - 1}")
        if u == v:
            raise GraphParseError(f"line {lineno}: loop edge at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        edges.append(key)
    if header is None:
        raise GraphParseError("line 1: empty input, expected 'n m' header")
    if len(edges) + duplicates != declared_m:
        raise GraphParseError(
            f"header declared {declared_m} edges but {len(edges) + duplicates} were listed"
        )
    return Graph(header[0], edges), duplicates


def parse_dimacs(text: str) -> tuple[Graph, int]:
    """Parse DIMACS .col: 'p edge n m' then 1-indexed 'e u v' lines."""
    n = None
    declared_m = 0
    edges = []
    seen = set()
    duplicates = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphParseError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphParseError(f"line {lineno}: expected 'p edge n m'")
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphParseError(f"line {lineno}: non-integer problem line") from None
            if n < 1:
                raise GraphParseError(f"line {lineno}: need at least one vertex")
        elif parts[0] == "e":
            if n is None:
                raise GraphParseError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise GraphParseError(f"line {lineno}: expected 'e u v'")
            try:
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
            except ValueError:
                raise GraphParseError(f"line {lineno}: non-integer vertex id") from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphParseError(f"line {lineno}: vertex id out of range 1..{n}")
            if u == v:
                raise GraphParseError(f"line {lineno}: loop edge at vertex {u + 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                duplicates += 1
                continue
            seen.add(key)
            edges.append(key)
        else:
            raise GraphParseError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphParseError("missing 'p edge' problem line")
    return Graph(n, edges), duplicates


def load_graph_text(text: str, filename: str = "") -> tuple[Graph, int]:
    """Dispatch on extension: .col means DIMACS, anything else edge list."""
    if filename.lower().endswith(".col"):
        return parse_dimacs(text)
    return parse_edge_list(text)


def write_edge_list(g: Graph, comment: str = "") -> str:
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"# {part}")
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for (u, v) in g.edges)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generators

MAX_ER_ATTEMPTS = 1000


def gen_er(n: int, p: float, seed: int) -> Graph:
    """Connected Erdos-Renyi G(n, p) draw.

    Each of the n(n-1)/2 pairs is included with probability p; draws are
    repeated with an incremented sub-seed until connected, bounded by
    MAX_ER_ATTEMPTS.
    """
    if n < 1:
        raise GraphError(f"need at least one vertex, got n={n}")
    if not (0.0 <= p <= 1.0):
        raise GraphError(f"edge probability must be in [0, 1], got {p}")
    for attempt in range(MAX_ER_ATTEMPTS):
        rng = random.Random(mix_seed(seed, attempt))
        edges = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < p
        ]
        g = Graph(n, edges)
        if is_connected(g):
            return g
    raise GenerationError(
        f"no connected G({n}, {p}) draw in {MAX_ER_ATTEMPTS} attempts (seed {seed})"
    )


def gen_named(family: str, *params: int) -> Graph:
    """Deterministic named families with fixed edge order.

    kite            4 vertices, 5 edges: the 4-cycle 0-1-2-3 plus chord
                    (0, 2), listed diagonal-first.
    cycle n         C_n, n >= 3.
    path n          P_n, n >= 1.
    wheel n         hub 0 plus an (n-1)-cycle rim, n >= 4; spokes first.
    complete n      K_n.
    tree_star n     K_{1,n-1}.
    grid3d a b c    3-D lattice with +x/+y/+z neighbor edges.
    """
    if family == "kite":
        _expect_params(family, params, 0)
        return Graph(4, [(0, 2), (0, 1), (0, 3), (1, 2), (2, 3)])
    if family == "cycle":
        (n,) = _expect_params(family, params, 1)
        if n < 3:
            raise GraphError("cycle needs n >= 3")
        return Graph(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])
    if family == "path":
        (n,) = _expect_params(family, params, 1)
        if n < 1:
            raise GraphError("path needs n >= 1")
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    if family == "wheel":
        (n,) = _expect_params(family, params, 1)
        if n < 4:
            raise GraphError("wheel needs n >= 4")
        spokes = [(0, i) for i in range(1, n)]
        rim = [(i, i + 1) for i in range(1, n - 1)] + [(1, n - 1)]
        return Graph(n, spokes + rim)
    if family == "complete":
        (n,) = _expect_params(family, params, 1)
        if n < 1:
            raise GraphError("complete needs n >= 1")
        return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if family == "tree_star":
        (n,) = _expect_params(family, params, 1)
        if n < 1:
            raise GraphError("tree_star needs n >= 1")
        return Graph(n, [(0, i) for i in range(1, n)])
    if family == "grid3d":
        a, b, c = _expect_params(family, params, 3)
        if min(a, b, c) < 1:
            raise GraphError("grid3d needs positive dimensions")
        def vid(x, y, z):
            return (x * b + y) * c + z
        edges = []
        for x in range(a):
            for y in range(b):
                for z in range(c):
                    if x + 1 < a:
                        edges.append((vid(x, y, z), vid(x + 1, y, z)))
                    if y + 1 < b:
                        edges.append((vid(x, y, z), vid(x, y + 1, z)))
                    if z + 1 < c:
                        edges.append((vid(x, y, z), vid(x, y, z + 1)))
        return Graph(a * b * c, edges)
    raise GraphError(f"unknown family {family!r}")


def _expect_params(family: str, params: tuple, k: int) -> tuple:
    if len(params) != k:
        raise GraphError(f"family {family!r} takes {k} parameter(s), got {len(params)}")
    return params


# ---------------------------------------------------------------------------
# orderings


@dataclass(frozen=True)
class VertexOrdering:
    """Elimination order: order[i] is the i-th vertex removed."""

    order: tuple[int, ...]
    rank: tuple[int, ...]

    def __post_init__(self):
        n = len(self.order)
        if sorted(self.order) != list(range(n)):
            raise GraphError("vertex order is not a permutation")
        for pos, v in enumerate(self.order):
            if self.rank[v] != pos:
                raise GraphError("vertex order and rank are not mutually inverse")

    @classmethod
    def from_order(cls, order) -> "VertexOrdering":
        order = tuple(order)
        if sorted(order) != list(range(len(order))):
            raise GraphError("vertex order is not a permutation")
        rank = [0] * len(order)
        for pos, v in enumerate(order):
            rank[v] = pos
        return cls(order, tuple(rank))


@dataclass(frozen=True)
class EdgeOrdering:
    """Total order on edge indices: order[0] is the smallest edge."""

    order: tuple[int, ...]
    rank: tuple[int, ...]

    def __post_init__(self):
        m = len(self.order)
        if sorted(self.order) != list(range(m)):
            raise GraphError("edge order is not a permutation")
        for pos, e in enumerate(self.order):
            if self.rank[e] != pos:
                raise GraphError("edge order and rank are not mutually inverse")

    @classmethod
    def from_order(cls, order) -> "EdgeOrdering":
        order = tuple(order)
        if sorted(order) != list(range(len(order))):
            raise GraphError("edge order is not a permutation")
        rank = [0] * len(order)
        for pos, e in enumerate(order):
            rank[e] = pos
        return cls(order, tuple(rank))


def input_edge_order(g: Graph) -> EdgeOrdering:
    """Edges compared by their position in the input edge list."""
    return EdgeOrdering.from_order(range(g.m))


def random_edge_order(g: Graph, rng: random.Random) -> EdgeOrdering:
    perm = list(range(g.m))
    rng.shuffle(perm)
    return EdgeOrdering.from_order(perm)


def peo_vertex_order(g: Graph) -> VertexOrdering:
    """Perfect-elimination-style vertex order.

    Repeatedly remove a simplicial vertex of the remaining graph (its
    remaining neighbors form a clique); if none exists, fall back to a
    vertex of minimum remaining degree.  Ties break to the smallest
    vertex id.  On chordal graphs every step is simplicial and the order
    is a perfect elimination order.
    """
    remaining = set(range(g.n))
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    order = []
    for _ in range(g.n):
        pick = None
        for v in sorted(remaining):
            nbrs = adj[v]
            if all(b in adj[a] for a in nbrs for b in nbrs if a < b):
                pick = v
                break
        if pick is None:
            pick = min(remaining, key=lambda v: (len(adj[v]), v))
        order.append(pick)
        remaining.discard(pick)
        for w in adj[pick]:
            adj[w].discard(pick)
        del adj[pick]
    return VertexOrdering.from_order(order)


def edge_order_from_vertex_order(g: Graph, vo: VertexOrdering) -> EdgeOrdering:
    """Edge order induced by an elimination order.

    Vertices eliminated later compare smaller.  Each edge is keyed by its
    endpoint comparison values sorted ascending, and edges compare
    lexicographically on those keys, so the globally smallest edge joins
    the two last-eliminated vertices that share an edge.
    """
    if len(vo.order) != g.n:
        raise GraphError("vertex ordering size does not match graph")
    n = g.n
    def vkey(v: int) -> int:
        return n - 1 - vo.rank[v]
    keys = []
    for idx, (u, v) in enumerate(g.edges):
        a, b = vkey(u), vkey(v)
        if a > b:
            a, b = b, a
        keys.append((a, b, idx))
    keys.sort()
    return EdgeOrdering.from_order(idx for (_, _, idx) in keys)
