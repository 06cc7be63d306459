"""Exact chromatic-polynomial references for small graphs.

Three independent routes to the same polynomial (deletion-contraction,
interpolation through brute-force coloring counts, and direct counting
of broken-circuit-free subgraphs) plus closed forms for named families.
They exist to cross-check each other and the Monte Carlo estimators, so
they deliberately share no counting logic.  All arithmetic is exact
(Python ints / Fractions).  Every oracle refuses loudly past its size
cap; the caps mark where exponential runtime stops being a desk-scale
tool, and silently truncated answers would poison every downstream
comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import EdgeOrdering, Graph

DC_CAP = 14
INTERP_CAP = 10
NBC_CAP = 12
PARTITION_CAP = 12
PATHCOUNT_CAP = 9


class OracleCapError(RuntimeError):
    """Input exceeds an exact oracle's size cap."""


def _check_cap(name: str, n: int, cap: int) -> None:
    if n > cap:
        raise OracleCapError(
            f"{name} refuses n={n} (cap {cap}): exact computation grows exponentially"
        )


# ---------------------------------------------------------------------------
# polynomial type


@dataclass(frozen=True)
class ExactPolynomial:
    """Integer polynomial, coefficients ascending by power."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("empty coefficient vector")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        """Exact Horner evaluation at an int or Fraction point."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def coefficient(self, power: int) -> int:
        return self.coeffs[power] if 0 <= power < len(self.coeffs) else 0

    def b_magnitudes(self) -> tuple[int, ...]:
        """|coefficient of x^(n-i)| for i = 0..n-1 (n = degree)."""
        n = self.degree
        return tuple(abs(self.coeffs[n - i]) for i in range(n))

    def chromatic_number(self) -> int:
        """Smallest positive integer k with P(k) > 0."""
        for k in range(1, self.degree + 2):
            if self(k) > 0:
                return k
        raise ValueError("no positive evaluation up to degree+1")

    def __str__(self):
        parts = []
        for p in range(self.degree, -1, -1):
            c = self.coeffs[p]
            if c:
                parts.append(f"{c:+d}*x^{p}")
        return " ".join(parts) if parts else "0"


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_sub(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return out


def whitney_polynomial(b_counts: Sequence[int]) -> ExactPolynomial:
    """Assemble P(x) = sum_i (-1)^i b_i x^(n-i) from subgraph counts."""
    n = len(b_counts)
    coeffs = [0] * (n + 1)
    for i, b in enumerate(b_counts):
        coeffs[n - i] = (-1) ** i * b
    return ExactPolynomial(tuple(coeffs))


# ---------------------------------------------------------------------------
# oracle 1: deletion-contraction


def exact_deletion_contraction(g: Graph, cap: int = DC_CAP) -> ExactPolynomial:
    """P(G) by the recursion P(G) = P(G - e) - P(G / e).

    Contracted graphs are simplified on the fly (parallel edges collapse;
    loops cannot arise from a simple graph when parallels are collapsed).
    Base case: an edgeless graph on j vertices contributes x^j.  The
    pivot is the edge whose contraction loses the most parallel edges,
    i.e. whose endpoints share the most neighbors.
    """
    _check_cap("exact_deletion_contraction", g.n, cap)
    return ExactPolynomial(tuple(_dc(g.n, frozenset(g.edges))))


def _dc(nv: int, edges: frozenset) -> list[int]:
    if not edges:
        return [0] * nv + [1]
    adj: dict[int, set[int]] = {}
    for (u, v) in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    # pivot: maximize common neighborhood -> smallest contracted graph
    pivot = max(edges, key=lambda e: (len(adj[e[0]] & adj[e[1]]), e))
    u, v = pivot
    deleted = edges - {pivot}
    contracted = set()
    for (a, b) in deleted:
        if a == v:
            a = u
        if b == v:
            b = u
        if a == b:
            continue  # parallel copy of the pivot, collapses away
        # relabel to keep vertices dense after dropping v
        a2 = a if a < v else a - 1
        b2 = b if b < v else b - 1
        contracted.add((a2, b2) if a2 < b2 else (b2, a2))
    return _poly_sub(_dc(nv, deleted), _dc(nv - 1, frozenset(contracted)))


# ---------------------------------------------------------------------------
# oracle 2: interpolation through brute-force coloring counts


def count_proper_colorings(g: Graph, k: int) -> int:
    """Number of proper colorings with k labeled colors, by backtracking.

    Vertices are scanned in BFS order so all but the first in each
    component see a colored neighbor; the final vertex's count is taken
    arithmetically instead of recursing one more level.
    """
    if k < 0:
        raise ValueError("color count must be nonnegative")
    if k == 0:
        return 0 if g.n > 0 else 1
    order = _bfs_order(g)
    earlier: list[list[int]] = []
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        earlier.append([pos[w] for w in g.adj[v] if pos[w] < pos[v]])
    n = g.n
    colors = [0] * n

    def rec(depth: int) -> int:
        if depth == n - 1:
            used = {colors[w] for w in earlier[depth]}
            return k - len(used)
        total = 0
        used = {colors[w] for w in earlier[depth]}
        for c in range(k):
            if c not in used:
                colors[depth] = c
                total += rec(depth + 1)
        return total

    if n == 1:
        return k
    return rec(0)


def _bfs_order(g: Graph) -> list[int]:
    seen = [False] * g.n
    order = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            order.append(x)
            for y in sorted(g.adj[x]):
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    return order


def exact_by_interpolation(g: Graph, cap: int = INTERP_CAP) -> ExactPolynomial:
    """P(G) interpolated through the counts at x = 0..n.

    A degree-n polynomial is fixed by n+1 points; the counts are exact,
    so Newton forward differences over Fractions recover exact integer
    coefficients (integrality is asserted).
    """
    _check_cap("exact_by_interpolation", g.n, cap)
    n = g.n
    ys = [Fraction(count_proper_colorings(g, k)) for k in range(n + 1)]
    # forward difference table: diffs[j] = Delta^j y_0
    diffs = list(ys)
    newton = []
    for j in range(n + 1):
        newton.append(diffs[0])
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
    # P(x) = sum_j Delta^j y_0 / j! * x(x-1)...(x-j+1)
    coeffs = [Fraction(0)] * (n + 1)
    basis = [Fraction(1)]  # falling-factorial product, ascending coeffs
    fact = Fraction(1)
    for j in range(n + 1):
        if j > 0:
            fact *= j
            # multiply basis by (x - (j-1))
            shifted = [Fraction(0)] + basis
            basis = [shifted[i] - (j - 1) * (basis[i] if i < len(basis) else 0)
                     for i in range(len(shifted))]
        term = newton[j] / fact
        for i, bc in enumerate(basis):
            coeffs[i] += term * bc
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise AssertionError(f"interpolation produced non-integer coefficient {c}")
        out.append(int(c))
    return ExactPolynomial(tuple(out))


# ---------------------------------------------------------------------------
# oracle 3: direct enumeration of broken-circuit-free subgraphs


def exact_nbc_counts(g: Graph, eo: EdgeOrdering, cap: int = NBC_CAP) -> tuple[int, ...]:
    """b_i = number of i-edge subgraphs containing no broken circuit.

    Enumerates subsets by ascending edge index (valid because the
    property is hereditary) and checks each candidate from scratch: the
    subset must be a forest and no absent edge may close a cycle in
    which it is the minimum.  Counts are returned for i = 0..n-1.
    """
    _check_cap("exact_nbc_counts", g.n, cap)
    n, m = g.n, g.m
    rank = eo.rank
    edges = g.edges
    counts = [0] * n
    counts[0] = 1
    chosen: list[int] = []

    def subset_ok_with(e: int) -> bool:
        sub = chosen + [e]
        # forest check
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        adj: dict[int, list[tuple[int, int]]] = {}
        for idx in sub:
            u, v = edges[idx]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
            adj.setdefault(u, []).append((v, rank[idx]))
            adj.setdefault(v, []).append((u, rank[idx]))
        # broken-circuit check: absent edge f whose endpoints are joined
        # by a path of strictly larger edges would be the circuit minimum
        in_sub = set(sub)
        for f in range(m):
            if f in in_sub:
                continue
            fu, fv = edges[f]
            if find(fu) != find(fv):
                continue
            path_min = _tree_path_min(adj, fu, fv)
            if path_min > rank[f]:
                return False
        return True

    def rec(start: int) -> None:
        if len(chosen) == n - 1:
            return
        for e in range(start, m):
            if subset_ok_with(e):
                chosen.append(e)
                counts[len(chosen)] += 1
                rec(e + 1)
                chosen.pop()

    rec(0)
    return tuple(counts)


def _tree_path_min(adj: dict, src: int, dst: int) -> int:
    """Minimum edge rank on the unique forest path src..dst."""
    stack = [(src, -1, 1 << 60)]
    while stack:
        x, par, lo = stack.pop()
        if x == dst:
            return lo
        for (y, rk) in adj.get(x, ()):
            if y != par:
                stack.append((y, x, min(lo, rk)))
    raise AssertionError("endpoints not connected in subset")


# ---------------------------------------------------------------------------
# closed forms


def formula_family(family: str, n: int) -> ExactPolynomial:
    """Closed-form chromatic polynomials.

    wheel:    x * ((x-2)^(n-1) + (-1)^(n+1) (x-2)),  n = total vertices
    cycle:    (x-1)^n + (-1)^n (x-1)
    complete: x(x-1)...(x-n+1)
    tree:     x (x-1)^(n-1)
    """
    if family == "wheel":
        if n < 4:
            raise ValueError("wheel formula needs n >= 4")
        inner = _poly_pow([-2, 1], n - 1)
        sign = (-1) ** (n + 1)
        inner = _poly_add(inner, [sign * -2, sign * 1])
        return ExactPolynomial(tuple(_poly_mul([0, 1], inner)))
    if family == "cycle":
        if n < 3:
            raise ValueError("cycle formula needs n >= 3")
        poly = _poly_pow([-1, 1], n)
        sign = (-1) ** n
        poly = _poly_add(poly, [sign * -1, sign * 1])
        return ExactPolynomial(tuple(poly))
    if family == "complete":
        if n < 1:
            raise ValueError("complete formula needs n >= 1")
        poly = [1]
        for j in range(n):
            poly = _poly_mul(poly, [-j, 1])
        return ExactPolynomial(tuple(poly))
    if family == "tree":
        if n < 1:
            raise ValueError("tree formula needs n >= 1")
        return ExactPolynomial(tuple(_poly_mul([0, 1], _poly_pow([-1, 1], n - 1))))
    raise ValueError(f"no closed form for family {family!r}")


def _poly_pow(base: list[int], k: int) -> list[int]:
    out = [1]
    for _ in range(k):
        out = _poly_mul(out, base)
    return out


# ---------------------------------------------------------------------------
# partition-side oracles (references for the falling-factorial sampler)


def independent_partition_counts(g: Graph, cap: int = PARTITION_CAP) -> tuple[int, ...]:
    """p_t = number of partitions of V into exactly t independent sets.

    Brute force over all set partitions in restricted-growth order,
    pruning blocks that would contain an edge.  Entry t-1 holds p_t.
    """
    _check_cap("independent_partition_counts", g.n, cap)
    n = g.n
    counts = [0] * n
    blocks: list[set[int]] = []

    def rec(v: int) -> None:
        if v == n:
            counts[len(blocks) - 1] += 1
            return
        for blk in blocks:
            if not (blk & g.adj[v]):
                blk.add(v)
                rec(v + 1)
                blk.discard(v)
        blocks.append({v})
        rec(v + 1)
        blocks.pop()

    if n > 0:
        rec(0)
    return tuple(counts)


def refinement_path_count(sizes: Sequence[int], cap: int = PATHCOUNT_CAP) -> int:
    """Distinct merge paths from singletons to a partition of given sizes.

    Counts sequences of pairwise block merges, by dynamic programming
    over the refinement lattice below one representative partition.
    Serves as the independent check on the closed-form duplicate count.
    """
    if any(s < 1 for s in sizes):
        raise ValueError("block sizes must be positive")
    n = sum(sizes)
    _check_cap("refinement_path_count", n, cap)
    # representative target: consecutive integer blocks
    target = []
    v = 0
    for s in sizes:
        target.append(frozenset(range(v, v + s)))
        v += s
    target_of = {}
    for bi, blk in enumerate(target):
        for x in blk:
            target_of[x] = bi
    target_state = frozenset(target)
    memo: dict[frozenset, int] = {}

    def paths(state: frozenset) -> int:
        if state == target_state:
            return 1
        if state in memo:
            return memo[state]
        blocks = sorted(state, key=min)
        total = 0
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                a, b = blocks[i], blocks[j]
                # merging must stay inside one target block
                if target_of[min(a)] == target_of[min(b)]:
                    merged = (state - {a, b}) | {a | b}
                    total += paths(merged)
        memo[state] = total
        return total

    singletons = frozenset(frozenset((x,)) for x in range(n))
    return paths(singletons)
