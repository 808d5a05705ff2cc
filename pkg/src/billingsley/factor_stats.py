"""Ranked prime factors of random integers and box probabilities, three ways.

For a box B = prod [t_i, t_i + dt_i] the probability P(P_i(N) in
[n^{t_i}, n^{t_i+dt_i}], i=1..k) for N uniform on [1, n] is computed by

* exact enumeration of all m <= n (vectorized largest-factor scans),
* the prime-tuple identity sum_{p_1 >= ... >= p_k} Psi(n/(p_1...p_k), p_k)/n,
* Monte Carlo with counter-based streams.

All three resolve interval endpoints through the same power_ceil/power_floor
pair, so a prime on the boundary classifies identically everywhere; the first
two must agree to the integer.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .errors import DomainError, ParameterError
from .primes import PrimeSieve, power_ceil, power_floor
from .smoothcount import psi_exact

from .rng import DEFAULT_SEED

#: Monte Carlo work is split into this many fixed logical shards; results are
#: a function of (seed, shard) only, so thread count never changes them.
MC_SHARDS = 64


@dataclass(frozen=True)
class BoxSpec:
    """A closed coordinate box prod_i [t[i], t[i] + dt[i]], listed largest
    coordinate first."""

    t: tuple
    dt: tuple

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(float(v) for v in self.t))
        object.__setattr__(self, "dt", tuple(float(v) for v in self.dt))
        if len(self.t) != len(self.dt) or not self.t:
            raise ParameterError("t and dt must be non-empty and equally long")
        if any(not math.isfinite(v) for v in self.t + self.dt):
            raise ParameterError("box coordinates must be finite")
        if any(d <= 0 for d in self.dt):
            raise ParameterError("box widths must be positive")

    @property
    def k(self) -> int:
        return len(self.t)

    def volume(self) -> float:
        return float(np.prod(self.dt))

    def diameter(self) -> float:
        return math.sqrt(sum(d * d for d in self.dt))

    def upper(self) -> tuple:
        return tuple(a + b for a, b in zip(self.t, self.dt))

    def inside_u(self) -> bool:
        return self._violation() is None

    def _violation(self) -> str | None:
        up = self.upper()
        if self.t[-1] <= 0:
            return f"t_{self.k} = {self.t[-1]} is not > 0"
        for i in range(self.k - 1):
            if up[i + 1] >= self.t[i]:
                return (f"t_{i + 2} + dt_{i + 2} = {up[i + 1]} is not < "
                        f"t_{i + 1} = {self.t[i]}")
        if sum(up) >= 1:
            return f"sum of right endpoints = {sum(up)} is not < 1"
        return None

    def require_inside_u(self) -> None:
        reason = self._violation()
        if reason is not None:
            raise DomainError(f"box not inside U: {reason}")

    def alpha(self) -> float:
        """1 - sum of right endpoints (positive iff the simplex constraint holds)."""
        return 1.0 - sum(self.upper())

    def u0(self) -> float:
        """(1 - sum t_i) / t_k, the largest rho argument over the box."""
        return (1.0 - sum(self.t)) / self.t[-1]

    @classmethod
    def from_string(cls, text: str) -> "BoxSpec":
        """Parse 't1,dt1;t2,dt2;...'."""
        ts, dts = [], []
        for part in text.split(";"):
            fields = part.split(",")
            if len(fields) != 2:
                raise ParameterError(f"bad box component {part!r}, want 't,dt'")
            ts.append(float(fields[0]))
            dts.append(float(fields[1]))
        return cls(t=tuple(ts), dt=tuple(dts))


@dataclass(frozen=True)
class FactorVector:
    """A sampled integer N <= n with its k largest prime factors (descending,
    padded with 1) and their logs scaled by log n."""

    n: int
    N: int
    p: tuple
    L: tuple


@dataclass(frozen=True)
class ExactProbability:
    count: int
    total: int

    @property
    def value(self) -> float:
        return self.count / self.total

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, self.total)


@dataclass(frozen=True)
class EmpiricalEstimate:
    hits: int
    total: int
    p_hat: float
    std_err: float
    seed: int

    @classmethod
    def from_counts(cls, hits: int, total: int, seed: int) -> "EmpiricalEstimate":
        p = hits / total
        return cls(hits=hits, total=total, p_hat=p,
                   std_err=math.sqrt(p * (1.0 - p) / total), seed=seed)


def ranked_factors(sieve: PrimeSieve, N: int, k: int) -> tuple:
    """The k largest prime factors of N with multiplicity, descending,
    padded with 1 beyond Omega(N)."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    factors = sieve.factorize(N)  # ascending
    top = factors[-k:][::-1]
    return tuple(top) + (1,) * (k - len(top))


def factor_vector(sieve: PrimeSieve, n: int, N: int, k: int) -> FactorVector:
    p = ranked_factors(sieve, N, k)
    logn = math.log(n)
    L = tuple(math.log(q) / logn if q > 1 else 0.0 for q in p)
    return FactorVector(n=n, N=N, p=p, L=L)


def prime_bounds(n: int, box: BoxSpec) -> list[tuple[int, int]]:
    """Integer interval [ceil(n^t_i), floor(n^{t_i+dt_i})] per coordinate."""
    return [(power_ceil(n, t), power_floor(n, t + d))
            for t, d in zip(box.t, box.dt)]


def box_probability_exact(sieve: PrimeSieve, n: int, box: BoxSpec,
                          chunk: int = 1 << 21) -> ExactProbability:
    """Exact count of m <= n whose ranked factors fall in the box's prime
    intervals, scanned in chunks off the sieve."""
    if n < 1 or n > sieve.limit:
        raise DomainError(f"n={n} outside sieve range [1, {sieve.limit}]")
    bounds = prime_bounds(n, box)
    lpf = sieve.largest_prime_factor_table()
    count = 0
    for start in range(1, n + 1, chunk):
        stop = min(n, start + chunk - 1)
        m = np.arange(start, stop + 1, dtype=np.int64)
        ok = np.ones(m.shape, dtype=bool)
        cur = m
        for lo, hi in bounds:
            p = lpf[cur]
            ok &= (p >= lo) & (p <= hi)
            if not ok.any():
                break
            cur = cur // np.maximum(p, np.int64(1))
        count += int(np.count_nonzero(ok))
    return ExactProbability(count=count, total=n)


def box_probability_via_psi(sieve: PrimeSieve, n: int, box: BoxSpec) -> ExactProbability:
    """The same probability through the prime-tuple sum
    sum Psi(n // (p_1 ... p_k), p_k).

    Requires the box inside U, which makes the per-coordinate prime ranges
    disjoint and descending: tuples are strictly ordered and the underlying
    events disjoint, so the sum counts each m exactly once.
    """
    box.require_inside_u()
    if n < 1:
        raise DomainError("n must be positive")
    bounds = prime_bounds(n, box)
    if bounds[0][1] > sieve.limit:
        raise DomainError(
            f"top prime range reaches {bounds[0][1]}, beyond sieve limit {sieve.limit}")
    ranges = [sieve.primes_in_range(lo, hi).tolist() for lo, hi in bounds]
    k = box.k
    count = 0

    def descend(level: int, prod: int) -> None:
        nonlocal count
        if level == k - 1:
            for p in ranges[level]:
                q = n // (prod * p)
                if q < 1:
                    break
                count += psi_exact(q, p)
            return
        for p in ranges[level]:
            if prod * p > n:
                break
            descend(level + 1, prod * p)

    if all(ranges):
        descend(0, 1)
    return ExactProbability(count=count, total=n)


def _mc_shard(sieve: PrimeSieve, n: int, bounds, seed: int, shard: int,
              count: int) -> int:
    if count == 0:
        return 0
    lpf = sieve.largest_prime_factor_table()
    m = rng.uniform_ints(seed, shard, count, n)
    ok = np.ones(m.shape, dtype=bool)
    cur = m
    for lo, hi in bounds:
        p = lpf[cur]
        ok &= (p >= lo) & (p <= hi)
        cur = cur // np.maximum(p, np.int64(1))
    return int(np.count_nonzero(ok))


def sample_box_probability(sieve: PrimeSieve, n: int, box: BoxSpec, samples: int,
                           seed: int = DEFAULT_SEED, threads: int = 1) -> EmpiricalEstimate:
    """Monte Carlo estimate of the box probability.

    The budget is split over MC_SHARDS fixed shards with independent
    counter-based streams, so the estimate depends only on (seed, samples),
    not on the thread count.
    """
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    if n < 1 or n > sieve.limit:
        raise DomainError(f"n={n} outside sieve range [1, {sieve.limit}]")
    sieve.largest_prime_factor_table()  # build once before threading
    bounds = prime_bounds(n, box)
    counts = rng.partition(samples, MC_SHARDS)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(
                lambda s: _mc_shard(sieve, n, bounds, seed, s, counts[s]),
                range(MC_SHARDS)))
    else:
        hits = sum(_mc_shard(sieve, n, bounds, seed, s, counts[s])
                   for s in range(MC_SHARDS))
    return EmpiricalEstimate.from_counts(hits, samples, seed)


def marginal_L1_cdf(n: int, t: float) -> float:
    """P(L_1(n) <= 1/t) = Psi(n, n^{1/t}) / n, exactly."""
    if n < 2:
        raise ParameterError("n must be >= 2")
    if t < 1:
        raise ParameterError("t must be >= 1")
    y = power_floor(n, 1.0 / t)
    return psi_exact(n, max(y, 1)) / n


def sample_factor_vectors(sieve: PrimeSieve, n: int, count: int, k: int,
                          seed: int = DEFAULT_SEED) -> list[FactorVector]:
    """Draw `count` uniform integers from [1, n] and rank their factors."""
    if n < 1 or n > sieve.limit:
        raise DomainError(f"n={n} outside sieve range [1, {sieve.limit}]")
    draws = rng.uniform_ints(seed, 0, count, n)
    return [factor_vector(sieve, n, int(N), k) for N in draws]
