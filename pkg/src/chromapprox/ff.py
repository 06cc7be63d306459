"""Falling-factorial sampling of chromatic polynomial coefficients.

A proper coloring of G with x colors is a partition of the vertices
into independent blocks plus an injective assignment of colors to
blocks, so P(G, x) = sum_t p_t * x(x-1)...(x-t+1) where p_t counts the
partitions of V into exactly t nonempty independent blocks.

The partitions form a layered tree rooted at the all-singletons
partition; each downward step merges two blocks with no edge between
them.  A partition with k blocks sits at depth n-k and is reachable by

    F(sizes) = (n-k)! * prod_i (beta_i! / 2^(beta_i - 1))

distinct root-to-leaf merge sequences (every interleaving of each
block's binary build history).  A uniform random walk that records the
number c_j of feasible merges before step j therefore makes

    p_hat(n-i) = c_0 * c_1 * ... * c_(i-1) / F(partition at depth i)

an unbiased estimate of p_(n-i): the visit probability of each
partition cancels against the product, leaving one count per partition.
When no merge is feasible the walk stops and every deeper level
estimates zero; those zeros are real observations and stay in the
averages.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import Graph, mix_seed
from .stats import (
    EstimateReport,
    LogNumber,
    run_sampling,
    summarize_accumulators,
)

LN2 = math.log(2.0)
NEG_INF = float("-inf")


def _validate_sizes(sizes: Sequence[int], n: int) -> None:
    if not sizes:
        raise ValueError("need at least one block")
    if any(s < 1 for s in sizes):
        raise ValueError("block sizes must be positive")
    if sum(sizes) != n:
        raise ValueError(f"block sizes sum to {sum(sizes)}, expected {n}")


def duplicate_count(sizes: Sequence[int], n: int) -> LogNumber:
    """Merge sequences from n singletons to a partition with these block
    sizes: F = (n-k)! * prod(beta! / 2^(beta-1)), in log space.
    """
    _validate_sizes(sizes, n)
    k = len(sizes)
    lx = math.lgamma(n - k + 1)
    for beta in sizes:
        lx += math.lgamma(beta + 1) - (beta - 1) * LN2
    return LogNumber(1, lx)


def duplicate_count_exact(sizes: Sequence[int]) -> int:
    """Exact-integer twin of duplicate_count (n implied by the sizes).

    The per-block factor beta!/2^(beta-1) alone can be a half-integer;
    the product with (n-k)! is always integral, which is asserted.
    """
    _validate_sizes(sizes, sum(sizes))
    n = sum(sizes)
    k = len(sizes)
    total = Fraction(math.factorial(n - k))
    for beta in sizes:
        total *= Fraction(math.factorial(beta), 1 << (beta - 1))
    if total.denominator != 1:
        raise AssertionError(f"duplicate count for {tuple(sizes)} is not integral")
    return total.numerator


class BlockMatrix:
    """A partition of V into independent blocks with O(1) conflict tests.

    Blocks are stored as vertex bitmasks together with the union of
    their members' neighborhoods, so blocks r and s conflict (some edge
    joins them) iff conflict[r] & members[s] != 0, which is symmetric.
    merge(r, s) ORs block s into the smaller index r and swap-deletes
    s with the last block; mergeable_pairs enumerates (r, s) with
    r < s in index order.  Together these fix the walk's selection
    sequence, making runs reproducible for a fixed generator.
    """

    __slots__ = ("n", "members", "conflict", "sizes")

    def __init__(self, g: Graph):
        self.n = g.n
        self.members = [1 << v for v in range(g.n)]
        self.sizes = [1] * g.n
        conflict = [0] * g.n
        for u, v in g.edges:
            conflict[u] |= 1 << v
            conflict[v] |= 1 << u
        self.conflict = conflict

    @property
    def k(self) -> int:
        return len(self.sizes)

    def conflicts(self, r: int, s: int) -> bool:
        """True iff some graph edge joins blocks r and s."""
        return bool(self.conflict[r] & self.members[s])

    def mergeable_pairs(self) -> list[tuple[int, int]]:
        pairs = []
        members, conflict = self.members, self.conflict
        k = len(members)
        for r in range(k - 1):
            cr = conflict[r]
            for s in range(r + 1, k):
                if not cr & members[s]:
                    pairs.append((r, s))
        return pairs

    def merge(self, r: int, s: int) -> None:
        if not 0 <= r < s < self.k:
            raise ValueError(f"bad block pair ({r}, {s})")
        if self.conflicts(r, s):
            raise ValueError(f"blocks {r} and {s} share an edge")
        members, conflict, sizes = self.members, self.conflict, self.sizes
        members[r] |= members[s]
        conflict[r] |= conflict[s]
        sizes[r] += sizes[s]
        last = len(sizes) - 1
        if s != last:
            members[s] = members[last]
            conflict[s] = conflict[last]
            sizes[s] = sizes[last]
        members.pop()
        conflict.pop()
        sizes.pop()

    def block_vertices(self, r: int) -> list[int]:
        mask = self.members[r]
        return [v for v in range(self.n) if mask >> v & 1]


@dataclass(frozen=True)
class FfSample:
    """One walk: per-step feasible-merge counts and level estimates.

    p_est runs in descending level order: p_est[i] estimates p_(n-i),
    so p_est[0] is p_n (always exactly 1) and p_est[-1] is p_1.  Levels
    below the walk's stopping point are exact zeros.
    """

    levels: tuple[int, ...]
    p_est: tuple[LogNumber, ...]


def _walk(
    g: Graph, rng: random.Random, trace: list[int] | None = None
) -> tuple[list[int], list[float]]:
    """One merge walk.  Returns (counts c_j, log p_hat descending).

    The log list holds log(p_hat(n-i)) at index i, -inf for levels the
    walk never reached.
    """
    n = g.n
    bm = BlockMatrix(g)
    log_p = [NEG_INF] * n
    log_p[0] = 0.0  # p_n: the singleton partition itself
    logc = 0.0
    logf = 0.0
    levels: list[int] = []
    merges = 0
    while bm.k > 1:
        pairs = bm.mergeable_pairs()
        c = len(pairs)
        levels.append(c)
        if trace is not None:
            trace.append(c)
        if c == 0:
            return levels, log_p
        r, s = pairs[rng.randrange(c)]
        logc += math.log(c)
        k = bm.k
        bs, bt = bm.sizes[r], bm.sizes[s]
        # the duplicate count gains the integer factor
        # (n-k+1) * binom(bs+bt, bs) / 2 at this merge; taking one log of
        # the exact product keeps unit factors exactly zero
        logf += math.log((n - k + 1) * math.comb(bs + bt, bs)) - LN2
        bm.merge(r, s)
        merges += 1
        log_p[merges] = logc - logf
    levels.append(0)
    if trace is not None:
        trace.append(0)
    return levels, log_p


def ff_sample(g: Graph, rng: random.Random) -> FfSample:
    """One random merge walk over independent partitions.

    Works on any graph, connected or not; with n = 1 the singleton
    partition is the whole tree and p_1 = 1.
    """
    if g.n == 1:
        return FfSample((0,), (LogNumber.one(),))
    levels, log_p = _walk(g, rng)
    p_est = tuple(
        LogNumber.zero() if lx == NEG_INF else LogNumber(1, lx) for lx in log_p
    )
    return FfSample(tuple(levels), p_est)


def ff_outcome_distribution(g: Graph) -> list[tuple[Fraction, tuple[Fraction, ...]]]:
    """Exact distribution of the walk's estimate vector, by enumeration.

    Expands the whole merge tree with Fraction probabilities and exact
    duplicate counts, returning the distinct estimate vectors (ordered
    p_n..p_1, like FfSample.p_est) with probabilities summing to 1.
    Exponential; small graphs only.
    """
    n = g.n
    if n == 1:
        return [(Fraction(1), (Fraction(1),))]
    nbr = [0] * n
    for u, v in g.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    outcomes: dict[tuple[Fraction, ...], Fraction] = {}

    def walk(members, conflict, sizes, prob, cprod, est):
        k = len(sizes)
        pairs = [
            (r, s)
            for r in range(k - 1)
            for s in range(r + 1, k)
            if not conflict[r] & members[s]
        ]
        if not pairs:
            key = tuple(est)
            outcomes[key] = outcomes.get(key, Fraction(0)) + prob
            return
        share = prob / len(pairs)
        cnext = cprod * len(pairs)
        for r, s in pairs:
            members2 = list(members)
            conflict2 = list(conflict)
            sizes2 = list(sizes)
            members2[r] |= members2[s]
            conflict2[r] |= conflict2[s]
            sizes2[r] += sizes2[s]
            del members2[s], conflict2[s], sizes2[s]
            est2 = list(est)
            est2[n - k + 1] = Fraction(cnext, duplicate_count_exact(sizes2))
            walk(members2, conflict2, sizes2, share, cnext, est2)

    est0 = [Fraction(0)] * n
    est0[0] = Fraction(1)
    walk(
        [1 << v for v in range(n)],
        list(nbr),
        [1] * n,
        Fraction(1),
        Fraction(1),
        est0,
    )
    return [(prob, vec) for vec, prob in sorted(outcomes.items())]


def ff_estimate(
    g: Graph,
    samples: int,
    seed: int,
    workers: int = 1,
    window_fraction: float = 0.1,
    tolerance: float = 0.01,
    snapshot_every: int | None = None,
) -> EstimateReport:
    """Monte Carlo estimate of p_n..p_1 for P(G, x) = sum p_t <x>_t.

    Accepts any graph (a partition is independent iff it is independent
    per connected component, so disconnected inputs are fine).  Worker
    seeding, snapshot cadence and convergence flags behave as in
    bc_estimate; a fixed (seed, samples, workers) triple reproduces
    exactly.  Labels and all per-level outputs run p_n down to p_1.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    if workers < 1:
        raise ValueError("workers must be positive")
    t0 = time.perf_counter()
    n = g.n
    cadence = snapshot_every if snapshot_every is not None else max(1, samples // 1000)
    labels = tuple(f"p_{t}" for t in range(n, 0, -1))
    worker_seeds = [mix_seed(seed, w) for w in range(workers)]

    if n == 1:
        one = LogNumber.one()
        zero = LogNumber.zero()
        return EstimateReport(
            alg="ff", variant=None, ordering=None, n=n, m=g.m,
            samples=samples, seed=seed, workers=workers, snapshot_every=cadence,
            window_fraction=window_fraction, tolerance=tolerance,
            wall_ms=(time.perf_counter() - t0) * 1000.0,
            labels=labels, means=(one,), variances=(zero,),
            variance_flags=(False,), converged=(True,),
            histories=(((samples, one),),),
        )

    def draw_into(rng: random.Random, bufs: list[list[float]]) -> None:
        _, log_p = _walk(g, rng)
        for buf, lx in zip(bufs, log_p):
            buf.append(lx)

    accs = run_sampling(n, draw_into, samples, worker_seeds, cadence)
    means, variances, flags, converged, histories = summarize_accumulators(
        accs, window_fraction, tolerance
    )
    return EstimateReport(
        alg="ff", variant=None, ordering=None, n=n, m=g.m,
        samples=samples, seed=seed, workers=workers, snapshot_every=cadence,
        window_fraction=window_fraction, tolerance=tolerance,
        wall_ms=(time.perf_counter() - t0) * 1000.0,
        labels=labels, means=means, variances=variances,
        variance_flags=flags, converged=converged, histories=histories,
    )


def stirling_first_row(t: int) -> list[int]:
    """Ascending coefficients of the falling factorial x(x-1)...(x-t+1).

    These are the signed Stirling numbers of the first kind s(t, k) for
    k = 0..t; stirling_first_row(0) is [1] for the empty product.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    coeffs = [1]
    for j in range(t):
        shifted = [0] + coeffs
        coeffs = [
            shifted[i] - j * (coeffs[i] if i < len(coeffs) else 0)
            for i in range(len(shifted))
        ]
    return coeffs


@dataclass(frozen=True)
class PowerBasisResult:
    """Power-basis coefficients (ascending) with cancellation flags.

    exact is True when the conversion ran in integer/rational
    arithmetic; then flagged is all-False.  Otherwise flagged[k] marks
    coefficients whose alternating sum lost more than the cancellation
    factor between its largest partial value and the result.
    """

    coeffs: tuple
    flagged: tuple[bool, ...]
    exact: bool


def falling_to_power(
    p_values: Sequence, cancellation_factor: float = 1e6
) -> PowerBasisResult:
    """Convert basis weights p_1..p_n into power-basis coefficients.

    Given P(x) = sum_t p_values[t-1] * x(x-1)...(x-t+1) -- note the
    ascending input order, lowest level first -- returns the
    coefficients of 1, x, ..., x^n.  Integer and Fraction inputs take
    an exact path.  Float and LogNumber inputs are combined with
    sign-aware log arithmetic, and any coefficient whose running sum
    ever exceeded cancellation_factor times the final magnitude is
    flagged as cancellation-suspect (a zero result from nonzero
    partials is always flagged).
    """
    p_values = list(p_values)
    n = len(p_values)
    if n == 0:
        raise ValueError("need at least p_1")
    rows = [stirling_first_row(t) for t in range(1, n + 1)]
    if all(isinstance(p, (int, Fraction)) for p in p_values):
        coeffs = [Fraction(0)] * (n + 1)
        for t, p in enumerate(p_values, start=1):
            if p == 0:
                continue
            row = rows[t - 1]
            for kk in range(t + 1):
                if row[kk]:
                    coeffs[kk] += p * row[kk]
        return PowerBasisResult(tuple(coeffs), tuple([False] * (n + 1)), True)

    coeffs = []
    flagged = []
    for kk in range(n + 1):
        acc = LogNumber.zero()
        peak = NEG_INF
        for t in range(max(kk, 1), n + 1):
            s = rows[t - 1][kk]
            if s == 0:
                continue
            term = LogNumber.from_value(p_values[t - 1]) * LogNumber.from_value(s)
            if term.sign == 0:
                continue
            acc = acc + term
            if acc.sign != 0 and acc.logmag > peak:
                peak = acc.logmag
        coeffs.append(acc)
        if peak == NEG_INF:
            flagged.append(False)
        elif acc.sign == 0:
            flagged.append(True)
        else:
            flagged.append(peak > acc.logmag + math.log(cancellation_factor))
    return PowerBasisResult(tuple(coeffs), tuple(flagged), False)
