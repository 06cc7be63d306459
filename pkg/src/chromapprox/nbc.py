"""Broken-circuit sampling of chromatic polynomial coefficients.

Fix a total order on the edges of a connected graph G.  A broken
circuit is a cycle with its smallest edge removed, and the coefficients
of P(G, x) = sum_i (-1)^i b_i x^(n-i) count the i-edge subgraphs that
contain no broken circuit.  Those subgraphs form a layered tree: level i
holds the valid i-edge subgraphs, each reachable from level i-1 by
adding one admissible edge.  Walking root-to-leaf, choosing uniformly
among the D_i admissible edges at each step, makes

    b_i_hat = |D_1| * |D_2| * ... * |D_i| / i!

an unbiased estimate of every b_i at once, because each level-i subgraph
is reached with probability proportional to the inverse of that product
(i! orderings, one path each).

Two variants are provided.  The plain one starts from the empty
subgraph.  The improved one seeds the walk with the globally smallest
edge, which belongs to every maximal valid subgraph and can never occur
inside a broken circuit, then estimates the number a_i of valid i-edge
supersets of it; b_i = a_{i-1} + a_i splits level i by membership of
that edge.  The improved walk has one fewer random step and never more
variance on the top coefficient.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .graph import (
    EdgeOrdering,
    Graph,
    GraphError,
    edge_order_from_vertex_order,
    input_edge_order,
    is_connected,
    mix_seed,
    peo_vertex_order,
    random_edge_order,
)
from .stats import (
    EstimateReport,
    LogNumber,
    _log_add_floats,
    run_sampling,
    summarize_accumulators,
)


class DisconnectedGraphError(GraphError):
    """Raised when a sampler is handed a graph it cannot span."""


# Salt for deriving the random-ordering stream from the run seed, fixed
# so that runs are reproducible across processes.
ORDER_SALT = 0x6F72646572

# Salts for per-worker sample streams are the worker indices themselves.


def resolve_edge_ordering(g: Graph, ordering, seed: int = 0) -> tuple[EdgeOrdering, str]:
    """Turn an ordering spec into a concrete EdgeOrdering.

    Accepts an EdgeOrdering instance or one of the named strategies
    "peo" (edge order induced by a perfect-elimination-style vertex
    order; exact on chordal graphs), "input" (edges as listed), or
    "random" (seeded shuffle).  Returns the ordering and its label.
    """
    if isinstance(ordering, EdgeOrdering):
        return ordering, "custom"
    if ordering == "peo":
        return edge_order_from_vertex_order(g, peo_vertex_order(g)), "peo"
    if ordering == "input":
        return input_edge_order(g), "input"
    if ordering == "random":
        rng = random.Random(mix_seed(seed, ORDER_SALT))
        return random_edge_order(g, rng), "random"
    raise ValueError(f"unknown edge ordering: {ordering!r}")


class DisjointSet:
    """Union-find over 0..n-1 with path halving and union by size."""

    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


class ForestState:
    """A growing forest of chosen edges, for the reference admissibility test.

    Tracks the chosen edge set, a union-find over components, and the
    forest adjacency (neighbor, edge index) for path queries.
    """

    def __init__(self, g: Graph, eo: EdgeOrdering, chosen: Sequence[int] = ()):
        self.g = g
        self.eo = eo
        self.dsu = DisjointSet(g.n)
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
        self.chosen: list[int] = []
        self.in_chosen: set[int] = set()
        for e in chosen:
            self.add(e)

    def add(self, e: int) -> None:
        u, v = self.g.edges[e]
        if not self.dsu.union(u, v):
            raise ValueError(f"edge {e} closes a cycle in the chosen forest")
        self.adj[u].append((v, e))
        self.adj[v].append((u, e))
        self.chosen.append(e)
        self.in_chosen.add(e)

    def path_min_rank(self, src: int, dst: int, extra: tuple[int, int, int] | None = None) -> int | None:
        """Smallest edge rank on the forest path src..dst, or None if no path.

        extra, when given, is a virtual edge (u, v, rank) treated as part
        of the forest for this query only.
        """
        if src == dst:
            raise ValueError("path endpoints coincide")
        rank = self.eo.rank
        big = self.g.m + 1
        best = {src: big}
        stack = [src]
        adj = self.adj
        while stack:
            x = stack.pop()
            mx = best[x]
            neighbors: Iterator[tuple[int, int]] = iter(adj[x])
            if extra is not None:
                eu, ev, er = extra
                if x == eu:
                    neighbors = iter(list(adj[x]) + [(ev, -1)])
                elif x == ev:
                    neighbors = iter(list(adj[x]) + [(eu, -1)])
            for y, e in neighbors:
                if y in best:
                    continue
                r = extra[2] if e == -1 else rank[e]
                best[y] = r if r < mx else mx
                if y == dst:
                    return best[y]
                stack.append(y)
        return None


def is_nbc_admissible(state: ForestState, e: int) -> bool:
    """Reference test: may edge e join the chosen forest?

    True iff adding e keeps the subgraph acyclic and creates no broken
    circuit: no absent edge f smaller than e may have its endpoints
    joined by a path (through the new forest) whose edges all exceed f.
    Deliberately brute force -- one path query per smaller absent edge --
    so it can serve as the oracle the incremental engine is checked
    against.
    """
    g, eo = state.g, state.eo
    u, v = g.edges[e]
    if state.dsu.connected(u, v):
        return False
    re = eo.rank[e]
    rank = eo.rank
    extra = (u, v, re)
    for f in range(g.m):
        if rank[f] >= re or f in state.in_chosen:
            continue
        fu, fv = g.edges[f]
        pmin = state.path_min_rank(fu, fv, extra)
        if pmin is not None and pmin > rank[f]:
            return False
    return True


class _BcEngine:
    """Incremental admissibility tracking for fast repeated sampling.

    Admissibility only ever decays as the forest grows (an edge dead by
    cycle stays in one component; a broken-circuit witness path never
    disappears, since forest paths are permanent).  The engine therefore
    keeps an alive set and, per component, a bucket of the non-chosen
    edges toward each neighboring component.  When a chosen edge merges
    components A and B:

      * the A-B bucket dies (those edges now close cycles), and
      * for every third component C, each alive candidate f in the A-C
        bucket is newly threatened exactly by the absent edges g < f in
        the B-C bucket (and symmetrically), because any new witness path
        must run through the chosen edge.  f dies if some such g has
        rank below every edge on the path g..f through the merge point,
        which factors into three precomputed path minima.

    Everything else is untouched, so a full sample costs roughly the
    sum of bucket-pair products at each merge instead of m * paths.
    """

    __slots__ = ("n", "m", "eu", "ev", "rank", "order", "log_int")

    def __init__(self, g: Graph, eo: EdgeOrdering):
        self.n = g.n
        self.m = g.m
        self.eu = [u for u, _ in g.edges]
        self.ev = [v for _, v in g.edges]
        self.rank = list(eo.rank)
        self.order = list(eo.order)
        self.log_int = [0.0] + [math.log(k) for k in range(1, max(g.m, g.n) + 1)]

    def run(
        self,
        rng: random.Random,
        improved: bool = False,
        trace: list[list[int]] | None = None,
    ) -> tuple[list[int], list[int]]:
        """One root-to-leaf walk.  Returns (level sizes, chosen edges).

        The admissible set is indexed in ascending edge order when the
        uniform choice is made, so a replay against the reference
        predicate with the same generator visits the same subgraphs.
        If trace is a list, the sorted admissible set at each step is
        appended to it.
        """
        n, m = self.n, self.m
        eu, ev, rank = self.eu, self.ev, self.rank
        inf = m  # ranks are < m

        parent = list(range(n))
        csize = [1] * n
        tadj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        pair: list[dict[int, list[int]]] = [dict() for _ in range(n)]
        for e in range(m):
            u, v = eu[e], ev[e]
            bucket = pair[u].get(v)
            if bucket is None:
                bucket = []
                pair[u][v] = bucket
                pair[v][u] = bucket
            bucket.append(e)

        alive = bytearray(1 for _ in range(m))
        alive_list = list(range(m))
        alive_pos = list(range(m))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def kill(e: int) -> None:
            if alive[e]:
                alive[e] = 0
                i = alive_pos[e]
                last = alive_list[-1]
                alive_list[i] = last
                alive_pos[last] = i
                alive_list.pop()

        def min_map(src: int) -> dict[int, int]:
            # Smallest edge rank on the forest path from src to each
            # vertex of its component (inf for src itself).
            out = {src: inf}
            stack = [src]
            while stack:
                x = stack.pop()
                mx = out[x]
                for y, r in tadj[x]:
                    if y not in out:
                        out[y] = r if r < mx else mx
                        stack.append(y)
            return out

        def cross(cands, cmap, threats, tmap, re, b3cache):
            # Kill candidates f in cands newly witnessed by absent
            # edges g < f in threats, across the merge edge.  cmap/tmap
            # are path-minimum maps over the candidate/threat side.
            tinfo = []
            tmin = inf
            for gid in threats:
                rg = rank[gid]
                ga, gb = eu[gid], ev[gid]
                if ga not in tmap:
                    ga, gb = gb, ga
                cap = tmap[ga]
                if re < cap:
                    cap = re
                if rg < cap:
                    tinfo.append((rg, gb))
                    if rg < tmin:
                        tmin = rg
            if not tinfo:
                return
            for fid in cands:
                if not alive[fid]:
                    continue
                rf = rank[fid]
                if rf <= tmin:
                    continue
                fa, fb = eu[fid], ev[fid]
                if fa not in cmap:
                    fa, fb = fb, fa
                mfa = cmap[fa]
                if mfa <= tmin:
                    continue
                bmap = None
                for rg, gb in tinfo:
                    if rg >= rf or rg >= mfa:
                        continue
                    if bmap is None:
                        bmap = b3cache.get(fb)
                        if bmap is None:
                            bmap = min_map(fb)
                            b3cache[fb] = bmap
                    if rg < bmap[gb]:
                        kill(fid)
                        break

        def merge(estar: int) -> None:
            u, v = eu[estar], ev[estar]
            ru, rv = find(u), find(v)
            re = rank[estar]
            mu = min_map(u)
            mv = min_map(v)
            dead = pair[ru].pop(rv, None)
            if dead is not None:
                pair[rv].pop(ru, None)
                for e in dead:
                    kill(e)
            if csize[ru] < csize[rv]:
                ru, rv = rv, ru
                mu, mv = mv, mu
            bu, bv = pair[ru], pair[rv]
            if bv:
                b3cache: dict[int, dict[int, int]] = {}
                for r3, ylist in list(bv.items()):
                    p3 = pair[r3]
                    xlist = bu.get(r3)
                    if xlist is None:
                        bu[r3] = ylist
                        p3[ru] = ylist
                        del p3[rv]
                        continue
                    b3cache.clear()
                    cross(xlist, mu, ylist, mv, re, b3cache)
                    cross(ylist, mv, xlist, mu, re, b3cache)
                    xlist.extend(ylist)
                    del p3[rv]
                bv.clear()
            parent[rv] = ru
            csize[ru] += csize[rv]
            tadj[u].append((v, re))
            tadj[v].append((u, re))

        chosen: list[int] = []
        levels: list[int] = []
        if improved:
            first = self.order[0]
            chosen.append(first)
            merge(first)
        steps = (n - 1) - len(chosen)
        for _ in range(steps):
            d = len(alive_list)
            if d == 0:
                raise AssertionError("no admissible edge before the forest spans")
            pool = sorted(alive_list)
            if trace is not None:
                trace.append(pool)
            levels.append(d)
            pick = pool[rng.randrange(d)]
            chosen.append(pick)
            merge(pick)
        return levels, chosen


def _plain_log_b(levels: Sequence[int], log_int: Sequence[float]) -> list[float]:
    """log b_i from plain-walk level sizes: b_i = prod(levels[:i]) / i!."""
    out = [0.0]
    cum = 0.0
    for i, d in enumerate(levels, start=1):
        cum += log_int[d] - log_int[i]
        out.append(cum)
    return out


def _improved_log_b(levels: Sequence[int], n: int, log_int: Sequence[float]) -> list[float]:
    """log b_i from improved-walk level sizes via b_i = a_{i-1} + a_i."""
    a = [0.0]
    cum = 0.0
    for i, d in enumerate(levels, start=1):
        cum += log_int[d] - log_int[i]
        a.append(cum)
    out = [0.0]
    for i in range(1, n - 1):
        out.append(_log_add_floats(a[i - 1], a[i]))
    out.append(a[n - 2])
    return out


def a_to_b(a: Sequence) -> tuple:
    """Merge seeded-walk estimates (a_0..a_{n-2}) into (b_0..b_{n-1}).

    b_0 = a_0, b_i = a_{i-1} + a_i, b_{n-1} = a_{n-2}.  Works for any
    value type supporting +, e.g. Fraction or LogNumber.
    """
    a = list(a)
    if not a:
        raise ValueError("need at least a_0")
    out = [a[0]]
    for i in range(1, len(a)):
        out.append(a[i - 1] + a[i])
    out.append(a[-1])
    return tuple(out)


@dataclass(frozen=True)
class BcSample:
    """One walk: per-step admissible counts and the implied estimates."""

    variant: str
    levels: tuple[int, ...]
    b_est: tuple[LogNumber, ...]
    chosen: tuple[int, ...]


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError(
            "graph is disconnected; estimate each connected component separately "
            "and multiply the resulting polynomials"
        )


def bc_sample(g: Graph, eo: EdgeOrdering, rng: random.Random) -> BcSample:
    """One plain walk on a connected graph."""
    _require_connected(g)
    if g.n == 1:
        return BcSample("plain", (), (LogNumber.one(),), ())
    engine = _BcEngine(g, eo)
    levels, chosen = engine.run(rng, improved=False)
    logs = _plain_log_b(levels, engine.log_int)
    b = tuple(LogNumber(1, lx) for lx in logs)
    return BcSample("plain", tuple(levels), b, tuple(chosen))


def bc_sample_improved(g: Graph, eo: EdgeOrdering, rng: random.Random) -> BcSample:
    """One walk seeded with the smallest edge, on a connected graph."""
    _require_connected(g)
    if g.n == 1:
        return BcSample("improved", (), (LogNumber.one(),), ())
    engine = _BcEngine(g, eo)
    levels, chosen = engine.run(rng, improved=True)
    logs = _improved_log_b(levels, g.n, engine.log_int)
    b = tuple(LogNumber(1, lx) for lx in logs)
    return BcSample("improved", tuple(levels), b, tuple(chosen))


def bc_outcome_distribution(
    g: Graph, eo: EdgeOrdering, variant: str = "plain"
) -> list[tuple[Fraction, tuple[Fraction, ...]]]:
    """Exact distribution of the walk's estimate vector, by enumeration.

    Expands the whole decision tree with Fraction probabilities using
    the reference admissibility test, and returns the distinct
    (b_0..b_{n-1}) estimate vectors with their probabilities (summing
    to 1).  Exponential in general; meant for small graphs, where it
    pins down both unbiasedness and the exact per-outcome values.
    """
    if variant not in ("plain", "improved"):
        raise ValueError(f"unknown variant: {variant!r}")
    _require_connected(g)
    n, m = g.n, g.m
    if n == 1:
        return [(Fraction(1), (Fraction(1),))]
    seeded = variant == "improved"
    total_steps = (n - 1) - (1 if seeded else 0)
    outcomes: dict[tuple[Fraction, ...], Fraction] = {}

    def levels_to_b(levels: list[int]) -> tuple[Fraction, ...]:
        vals = [Fraction(1)]
        cum = Fraction(1)
        for i, d in enumerate(levels, start=1):
            cum = cum * d / i
            vals.append(cum)
        if seeded:
            return tuple(a_to_b(vals))
        return tuple(vals)

    def walk(chosen: list[int], prob: Fraction, levels: list[int]) -> None:
        if len(levels) == total_steps:
            b = levels_to_b(levels)
            outcomes[b] = outcomes.get(b, Fraction(0)) + prob
            return
        state = ForestState(g, eo, chosen)
        pool = [e for e in range(m) if e not in state.in_chosen and is_nbc_admissible(state, e)]
        share = prob / len(pool)
        for e in pool:
            walk(chosen + [e], share, levels + [len(pool)])

    start = [eo.order[0]] if seeded else []
    walk(start, Fraction(1), [])
    return [(prob, vec) for vec, prob in sorted(outcomes.items())]


def bc_estimate(
    g: Graph,
    samples: int,
    seed: int,
    variant: str = "plain",
    ordering="peo",
    workers: int = 1,
    window_fraction: float = 0.1,
    tolerance: float = 0.01,
    snapshot_every: int | None = None,
) -> EstimateReport:
    """Monte Carlo estimate of the magnitudes b_0..b_{n-1} of P(G, x).

    Runs `samples` independent walks of the chosen variant ("plain" or
    "improved"), splitting them over `workers` threads with per-worker
    seeded substreams (stream w is seeded by mixing `seed` with w), and
    accumulates each coefficient in log space.  Running-mean snapshots
    are taken every snapshot_every samples (default samples // 1000, at
    least 1) and feed the per-coefficient convergence flags.  Results
    for a fixed (seed, samples, workers) triple are reproducible.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    if workers < 1:
        raise ValueError("workers must be positive")
    if variant not in ("plain", "improved"):
        raise ValueError(f"unknown variant: {variant!r}")
    _require_connected(g)
    t0 = time.perf_counter()
    eo, olabel = resolve_edge_ordering(g, ordering, seed)
    n = g.n
    cadence = snapshot_every if snapshot_every is not None else max(1, samples // 1000)
    labels = tuple(f"b_{i}" for i in range(n))
    worker_seeds = [mix_seed(seed, w) for w in range(workers)]

    if n == 1:
        one = LogNumber.one()
        zero = LogNumber.zero()
        return EstimateReport(
            alg="bc", variant=variant, ordering=olabel, n=n, m=g.m,
            samples=samples, seed=seed, workers=workers, snapshot_every=cadence,
            window_fraction=window_fraction, tolerance=tolerance,
            wall_ms=(time.perf_counter() - t0) * 1000.0,
            labels=labels, means=(one,), variances=(zero,),
            variance_flags=(False,), converged=(True,),
            histories=(((samples, one),),),
        )

    engine = _BcEngine(g, eo)
    log_int = engine.log_int
    improved = variant == "improved"

    if improved:

        def draw_into(rng: random.Random, bufs: list[list[float]]) -> None:
            levels, _ = engine.run(rng, improved=True)
            for buf, lx in zip(bufs, _improved_log_b(levels, n, log_int)):
                buf.append(lx)

    else:

        def draw_into(rng: random.Random, bufs: list[list[float]]) -> None:
            levels, _ = engine.run(rng, improved=False)
            cum = 0.0
            bufs[0].append(0.0)
            i = 1
            for d in levels:
                cum += log_int[d] - log_int[i]
                bufs[i].append(cum)
                i += 1

    accs = run_sampling(n, draw_into, samples, worker_seeds, cadence)
    means, variances, flags, converged, histories = summarize_accumulators(
        accs, window_fraction, tolerance
    )
    return EstimateReport(
        alg="bc", variant=variant, ordering=olabel, n=n, m=g.m,
        samples=samples, seed=seed, workers=workers, snapshot_every=cadence,
        window_fraction=window_fraction, tolerance=tolerance,
        wall_ms=(time.perf_counter() - t0) * 1000.0,
        labels=labels, means=means, variances=variances,
        variance_flags=flags, converged=converged, histories=histories,
    )


def signed_coefficients(b_mags: Sequence[LogNumber]) -> list[LogNumber]:
    """Ascending-power signed coefficients from magnitudes b_0..b_{n-1}.

    Coefficient of x^(n-i) is (-1)^i * b_i; the constant term is zero.
    """
    n = len(b_mags)
    out = [LogNumber.zero() for _ in range(n + 1)]
    for i, b in enumerate(b_mags):
        sign = -b.sign if i % 2 else b.sign
        out[n - i] = LogNumber(sign, b.logmag)
    return out
