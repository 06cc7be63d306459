"""Signed log-space numerics and streaming sample statistics.

Chromatic-polynomial coefficients outgrow IEEE doubles almost immediately
(the middle coefficient of the 100-cycle is ~1e29, and a few hundred
vertices push magnitudes past 1e300), so every quantity an estimator
touches is carried as a natural-log magnitude with an explicit sign.
Sample streams are reduced as log-space running sums: the accumulator
keeps sum(x) and sum(x^2) rather than Welford's M2 because merging
per-worker partials then needs only a pair of log-additions, which is
associative up to float rounding.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

NEG_INF = float("-inf")

# Relative threshold below which the result of a sign-aware log-space
# subtraction is treated as total cancellation: the operands agree to
# more digits than the float pipeline can certify, so the difference is
# reported as zero with a precision-loss flag rather than as noise.
CANCEL_REL_EPS = 1e-12


class LogNumber:
    """A real number stored as (sign, ln |value|).

    sign is -1, 0 or +1; logmag is ln(|value|) and is -inf exactly when
    sign == 0.  Arithmetic never leaves log space, so magnitudes far
    beyond float range stay representable as long as their *logs* fit.
    """

    __slots__ = ("sign", "logmag")

    def __init__(self, sign: int, logmag: float):
        if sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {sign!r}")
        if sign == 0:
            logmag = NEG_INF
        elif logmag == NEG_INF:
            sign = 0
        elif not (logmag < math.inf):
            raise ValueError(f"logmag must be finite or -inf, got {logmag!r}")
        self.sign = sign
        self.logmag = logmag

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "LogNumber":
        return cls(0, NEG_INF)

    @classmethod
    def one(cls) -> "LogNumber":
        return cls(1, 0.0)

    @classmethod
    def from_value(cls, v) -> "LogNumber":
        """Build from an int, float, Fraction or LogNumber."""
        if isinstance(v, LogNumber):
            return v
        if isinstance(v, Fraction):
            if v == 0:
                return cls.zero()
            sign = 1 if v > 0 else -1
            # math.log accepts arbitrary-size ints, so huge rationals
            # convert without overflowing an intermediate float.
            return cls(sign, math.log(abs(v.numerator)) - math.log(v.denominator))
        if isinstance(v, int):
            if v == 0:
                return cls.zero()
            return cls(1 if v > 0 else -1, math.log(abs(v)))
        v = float(v)
        if v == 0.0:
            return cls.zero()
        if math.isinf(v) or math.isnan(v):
            raise ValueError(f"cannot represent {v!r}")
        return cls(1 if v > 0 else -1, math.log(abs(v)))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "LogNumber") -> "LogNumber":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        if self.logmag >= other.logmag:
            hi, lo = self, other
        else:
            hi, lo = other, self
        d = lo.logmag - hi.logmag  # <= 0
        if self.sign == other.sign:
            return LogNumber(self.sign, hi.logmag + math.log1p(math.exp(d)))
        if d == 0.0:
            # Equal magnitude, opposite sign: exact zero.
            return LogNumber.zero()
        return LogNumber(hi.sign, hi.logmag + math.log1p(-math.exp(d)))

    def __neg__(self) -> "LogNumber":
        return LogNumber(-self.sign, self.logmag)

    def __sub__(self, other: "LogNumber") -> "LogNumber":
        return self + (-other)

    def __mul__(self, other: "LogNumber") -> "LogNumber":
        if self.sign == 0 or other.sign == 0:
            return LogNumber.zero()
        return LogNumber(self.sign * other.sign, self.logmag + other.logmag)

    def __truediv__(self, other: "LogNumber") -> "LogNumber":
        if other.sign == 0:
            raise ZeroDivisionError("LogNumber division by zero")
        if self.sign == 0:
            return LogNumber.zero()
        return LogNumber(self.sign * other.sign, self.logmag - other.logmag)

    def __abs__(self) -> "LogNumber":
        return LogNumber(abs(self.sign), self.logmag)

    # -- comparison / inspection ----------------------------------------

    def _key(self):
        # Orderable key: sign first, then magnitude in the sign's direction.
        return (self.sign, self.sign * self.logmag if self.sign else 0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogNumber):
            return NotImplemented
        return self.sign == other.sign and self.logmag == other.logmag

    def __lt__(self, other: "LogNumber") -> bool:
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        return self.sign * (self.logmag - other.logmag) < 0

    def __le__(self, other: "LogNumber") -> bool:
        return self == other or self < other

    def __hash__(self):
        return hash((self.sign, self.logmag))

    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def log10(self) -> float:
        """log10 of the magnitude (-inf for zero)."""
        return self.logmag / math.log(10.0)

    def value(self) -> float:
        """Nearest float; overflows to +-inf rather than raising."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.logmag)
        except OverflowError:
            return self.sign * math.inf

    def decimal_string(self) -> str | None:
        """Plain decimal rendering, or None when |value| >= 1e15."""
        if self.sign == 0:
            return "0"
        if self.logmag >= math.log(1e15):
            return None
        return "%.12g" % self.value()

    def __repr__(self):
        s = {1: "+", 0: "0", -1: "-"}[self.sign]
        return f"LogNumber({s}, {self.logmag:.6f})"


def log_add(a: LogNumber, b: LogNumber) -> LogNumber:
    """Sign-aware addition in log space (same as ``a + b``)."""
    return a + b


def log_sub(a: LogNumber, b: LogNumber) -> LogNumber:
    return a - b


def log_factorial(k: int) -> float:
    """ln(k!) via lgamma; relative error is at the float epsilon level."""
    if k < 0:
        raise ValueError("factorial of negative integer")
    return math.lgamma(k + 1)


def relative_difference(a: LogNumber, b: LogNumber) -> float:
    """|a - b| / max(|a|, |b|), 0.0 when both are zero."""
    if a.sign == 0 and b.sign == 0:
        return 0.0
    d = a - b
    if d.sign == 0:
        return 0.0
    scale = max(a.logmag, b.logmag)
    return math.exp(d.logmag - scale)


def _log_add_floats(a: float, b: float) -> float:
    """logaddexp for plain nonnegative magnitudes (logs may be -inf)."""
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def _log_sum_exp(values: Sequence[float]) -> float:
    hi = max(values)
    if hi == NEG_INF:
        return NEG_INF
    return hi + math.log(sum(math.exp(v - hi) for v in values))


class SampleAccumulator:
    """Streaming count / sum(x) / sum(x^2) over nonnegative samples.

    Samples enter as log magnitudes (-inf encodes zero).  A history of
    (count, log_sum) checkpoints can be recorded for convergence checks
    and trace output.  Constant streams are detected so that quantities
    that are exact by construction report a variance of exactly zero.
    """

    __slots__ = ("count", "_log_sum", "_log_sumsq", "history", "_const_log", "_is_const")

    def __init__(self):
        self.count = 0
        self._log_sum = NEG_INF
        self._log_sumsq = NEG_INF
        self.history: list[tuple[int, float]] = []
        self._const_log = 0.0
        self._is_const = True  # vacuously true while empty

    # -- feeding -------------------------------------------------------

    def push(self, x: LogNumber) -> None:
        """Add one sample; x must be >= 0."""
        if x.sign < 0:
            raise ValueError("samples must be nonnegative")
        self.push_log(x.logmag if x.sign else NEG_INF)

    def push_log(self, lx: float) -> None:
        if self.count == 0:
            self._const_log = lx
        elif lx != self._const_log:
            self._is_const = False
        self.count += 1
        self._log_sum = _log_add_floats(self._log_sum, lx)
        self._log_sumsq = _log_add_floats(self._log_sumsq, NEG_INF if lx == NEG_INF else 2.0 * lx)

    def push_logs(self, lxs: Sequence[float]) -> None:
        """Batched push; same reduction, fewer Python-level log calls."""
        if not lxs:
            return
        first = lxs[0]
        if self.count == 0:
            self._const_log = first
        if self._is_const and any(v != self._const_log for v in lxs):
            self._is_const = False
        self.count += len(lxs)
        self._log_sum = _log_add_floats(self._log_sum, _log_sum_exp(lxs))
        self._log_sumsq = _log_add_floats(
            self._log_sumsq,
            _log_sum_exp([NEG_INF if v == NEG_INF else 2.0 * v for v in lxs]),
        )

    def snapshot(self) -> None:
        """Record a (count, log_sum) checkpoint."""
        self.history.append((self.count, self._log_sum))

    # -- reading -------------------------------------------------------

    @property
    def log_sum(self) -> LogNumber:
        return LogNumber(0 if self._log_sum == NEG_INF else 1, self._log_sum)

    @property
    def log_sumsq(self) -> LogNumber:
        return LogNumber(0 if self._log_sumsq == NEG_INF else 1, self._log_sumsq)

    def mean(self) -> LogNumber:
        if self.count == 0:
            raise ValueError("mean of empty accumulator")
        if self._is_const:
            # A constant stream's mean is that constant; bypassing the
            # big log-sum keeps by-construction-exact quantities exact.
            if self._const_log == NEG_INF:
                return LogNumber.zero()
            return LogNumber(1, self._const_log)
        if self._log_sum == NEG_INF:
            return LogNumber.zero()
        return LogNumber(1, self._log_sum - math.log(self.count))

    def variance(self) -> LogNumber:
        return self.variance_info()[0]

    def variance_info(self) -> tuple[LogNumber, bool]:
        """Unbiased sample variance and a precision-loss flag.

        Computed sign-aware as (sum(x^2) - sum(x)^2/n) / (n-1).  When the
        two terms agree to within CANCEL_REL_EPS relative the subtraction
        carries no certifiable digits and (zero, True) is returned; the
        same happens if rounding drives the difference negative.
        """
        if self.count < 2:
            return LogNumber.zero(), False
        if self._is_const:
            return LogNumber.zero(), False
        t_sq = self._log_sumsq
        t_mean = 2.0 * self._log_sum - math.log(self.count)
        if t_sq == NEG_INF and t_mean == NEG_INF:
            return LogNumber.zero(), False
        if abs(t_sq - t_mean) <= CANCEL_REL_EPS:
            return LogNumber.zero(), True
        if t_sq < t_mean:
            # Mathematically impossible (Cauchy-Schwarz); float noise only.
            return LogNumber.zero(), True
        diff = t_sq + math.log1p(-math.exp(t_mean - t_sq))
        return LogNumber(1, diff - math.log(self.count - 1)), False

    def mean_history(self) -> list[tuple[int, LogNumber]]:
        """History checkpoints as (count, running mean)."""
        out = []
        for cnt, ls in self.history:
            if cnt == 0:
                continue
            if ls == NEG_INF:
                out.append((cnt, LogNumber.zero()))
            else:
                out.append((cnt, LogNumber(1, ls - math.log(cnt))))
        return out


def welford_push(acc: SampleAccumulator, x: LogNumber) -> SampleAccumulator:
    """Push one sample and return the accumulator (update is in place)."""
    acc.push(x)
    return acc


def merge(a: SampleAccumulator, b: SampleAccumulator) -> SampleAccumulator:
    """Combine two disjoint accumulators.

    Counts add, log sums log-add, and histories merge pointwise; when one
    history is shorter it is padded with its final totals, so the merged
    history reads as the pooled running sum at each checkpoint round.
    """
    out = SampleAccumulator()
    out.count = a.count + b.count
    out._log_sum = _log_add_floats(a._log_sum, b._log_sum)
    out._log_sumsq = _log_add_floats(a._log_sumsq, b._log_sumsq)
    if a.count == 0:
        out._is_const, out._const_log = b._is_const, b._const_log
    elif b.count == 0:
        out._is_const, out._const_log = a._is_const, a._const_log
    else:
        out._is_const = a._is_const and b._is_const and a._const_log == b._const_log
        out._const_log = a._const_log
    ha, hb = a.history, b.history
    rounds = max(len(ha), len(hb))
    hist = []
    for i in range(rounds):
        ca, sa = ha[i] if i < len(ha) else (a.count, a._log_sum)
        cb, sb = hb[i] if i < len(hb) else (b.count, b._log_sum)
        hist.append((ca + cb, _log_add_floats(sa, sb)))
    out.history = hist
    return out


def convergence_check(
    means: Sequence[LogNumber],
    window_fraction: float = 0.1,
    tolerance: float = 0.01,
) -> bool:
    """Flat-tail convergence test over running-mean snapshots.

    True iff every snapshot in the trailing window (last window_fraction
    of the history, at least one entry) differs from the current mean by
    at most tolerance * |current mean|.  Requires >= 2 snapshots.
    """
    if len(means) < 2:
        raise ValueError("need at least two snapshots")
    current = means[-1]
    w = max(1, math.ceil(window_fraction * len(means)))
    log_tol = math.log(tolerance)
    for snap in means[-w:]:
        d = snap - current
        if d.sign == 0:
            continue
        if current.sign == 0:
            return False
        if d.logmag > current.logmag + log_tol:
            return False
    return True


def horner_log(coeffs: Sequence, x) -> LogNumber:
    """Evaluate sum(coeffs[i] * x^i) by Horner's rule in log space.

    Coefficients may be ints, floats, Fractions or LogNumbers.
    """
    xl = LogNumber.from_value(x)
    acc = LogNumber.zero()
    for c in reversed(list(coeffs)):
        acc = acc * xl + LogNumber.from_value(c)
    return acc


def rel_eval_error(true_coeffs: Sequence, approx_coeffs: Sequence, x) -> float:
    """|P_true(x) - P_approx(x)| / |P_true(x)| with log-space Horner.

    Both inputs are ascending-power signed coefficient vectors; x must
    satisfy P_true(x) != 0.
    """
    pt = horner_log(true_coeffs, x)
    pa = horner_log(approx_coeffs, x)
    if pt.sign == 0:
        raise ValueError(f"reference polynomial vanishes at x={x}")
    d = pt - pa
    if d.sign == 0:
        return 0.0
    return math.exp(d.logmag - pt.logmag)


def arc_error(true_coeffs: Sequence, approx_coeffs: Sequence) -> tuple[float, int]:
    """Mean per-coefficient relative error and the skipped-zero count.

    Coefficients where the reference is exactly zero contribute nothing
    (the relative error is undefined there); how many were skipped is
    returned alongside the mean so callers can report it.
    """
    if len(true_coeffs) != len(approx_coeffs):
        raise ValueError("coefficient vectors differ in length")
    total = 0.0
    used = 0
    skipped = 0
    for t, a in zip(true_coeffs, approx_coeffs):
        tl = LogNumber.from_value(t)
        al = LogNumber.from_value(a)
        if tl.sign == 0:
            skipped += 1
            continue
        d = tl - al
        if d.sign != 0:
            total += math.exp(d.logmag - tl.logmag)
        used += 1
    if used == 0:
        raise ValueError("all reference coefficients are zero")
    return total / used, skipped


@dataclass(frozen=True)
class EstimateReport:
    """Everything a sampling run produced, ready for serialization.

    means/variances/converged/histories are indexed per estimated series
    (one per coefficient), in the order given by labels.  histories holds
    (sample count, running mean) checkpoints taken every snapshot_every
    samples within each worker, merged across workers.
    """

    alg: str
    variant: str | None
    ordering: str | None
    n: int
    m: int
    samples: int
    seed: int
    workers: int
    snapshot_every: int
    window_fraction: float
    tolerance: float
    wall_ms: float
    labels: tuple[str, ...]
    means: tuple[LogNumber, ...]
    variances: tuple[LogNumber, ...]
    variance_flags: tuple[bool, ...]
    converged: tuple[bool, ...]
    histories: tuple[tuple[tuple[int, LogNumber], ...], ...]


def run_sampling(
    n_series: int,
    draw_into: Callable[[random.Random, list[list[float]]], None],
    samples: int,
    worker_seeds: Sequence[int],
    snapshot_every: int,
) -> list[SampleAccumulator]:
    """Drive a sampling loop into one accumulator per series.

    draw_into(rng, bufs) must append exactly one log magnitude to each
    of the n_series buffers per call.  Buffered values are flushed and a
    history checkpoint taken every snapshot_every draws.  Workers get
    near-equal shares (leftovers to the lowest indices), each with its
    own seeded generator, and are merged in index order, so results for
    a fixed (worker_seeds, samples, snapshot_every) are reproducible
    regardless of scheduling.
    """
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    if snapshot_every < 1:
        raise ValueError("snapshot_every must be positive")
    workers = len(worker_seeds)
    if workers < 1:
        raise ValueError("need at least one worker seed")
    shares = [samples // workers + (1 if w < samples % workers else 0) for w in range(workers)]

    def worker(w: int) -> list[SampleAccumulator]:
        rng = random.Random(worker_seeds[w])
        accs = [SampleAccumulator() for _ in range(n_series)]
        bufs: list[list[float]] = [[] for _ in range(n_series)]
        pending = 0
        for _ in range(shares[w]):
            draw_into(rng, bufs)
            pending += 1
            if pending == snapshot_every:
                for acc, buf in zip(accs, bufs):
                    acc.push_logs(buf)
                    buf.clear()
                    acc.snapshot()
                pending = 0
        if pending:
            for acc, buf in zip(accs, bufs):
                acc.push_logs(buf)
                buf.clear()
                acc.snapshot()
        return accs

    if workers == 1:
        results = [worker(0)]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(worker, range(workers)))
    merged = results[0]
    for other in results[1:]:
        merged = [merge(a, b) for a, b in zip(merged, other)]
    return merged


def summarize_accumulators(
    accs: Sequence[SampleAccumulator],
    window_fraction: float,
    tolerance: float,
) -> tuple[tuple, tuple, tuple, tuple, tuple]:
    """(means, variances, variance_flags, converged, histories) for a report."""
    means = tuple(a.mean() for a in accs)
    vpairs = [a.variance_info() for a in accs]
    variances = tuple(v for v, _ in vpairs)
    flags = tuple(f for _, f in vpairs)
    histories = tuple(tuple(a.mean_history()) for a in accs)
    converged = []
    for hist in histories:
        ms = [mean for _, mean in hist]
        if len(ms) < 2:
            converged.append(False)
        else:
            converged.append(convergence_check(ms, window_fraction, tolerance))
    return means, variances, flags, tuple(converged), histories
