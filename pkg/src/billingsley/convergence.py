"""Finite-n harness for the box criterion of weak convergence.

A closed box B inside the open support U qualifies when R * diam(B) is
smaller than the distance from B to the complement of U; the harness then
checks, along a ladder of n, that the observed probability P(X_n in B) stays
above (1 - eps) * vol(B) * inf_B f (minus a statistical margin when the
probability is itself estimated by Monte Carlo).

U is the open convex polytope {t_1 > ... > t_k > 0, sum t_i < 1}, so the
distance to its complement is the minimum over the k+1 facet half-spaces of
the point-to-hyperplane distance, and that minimum over a box is attained at
a vertex because each distance is affine per coordinate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dickman import DickmanTable, rho
from .errors import DomainError, ParameterError
from .factor_stats import BoxSpec, box_probability_exact, sample_box_probability
from .primes import PrimeSieve
from .rng import DEFAULT_SEED

#: Monte Carlo verdicts get this many standard errors of slack
STAT_MARGIN_SIGMAS = 4.0


@dataclass(frozen=True)
class BoxCriterion:
    """Parameters of the admissibility test; R defaults to k/(2*eps)."""

    epsilon: float
    k: int
    R: float | None = None

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ParameterError("epsilon must lie in (0, 1)")
        if self.k < 1:
            raise ParameterError("k must be >= 1")
        if self.R is None:
            object.__setattr__(self, "R", self.k / (2.0 * self.epsilon))
        if self.R < 0:
            raise ParameterError("R must be >= 0")


@dataclass(frozen=True)
class LadderEntry:
    n: int
    method: str  # "exact" or "mc"
    estimate: float
    std_err: float | None
    verdict: bool


@dataclass(frozen=True)
class ConvergenceReport:
    box: BoxSpec
    epsilon: float
    R: float
    admissible: bool
    volume: float
    inf_density: float
    lower_bound: float
    entries: tuple[LadderEntry, ...] = field(default=())
    trend: bool = False

    def all_pass(self) -> bool:
        return all(e.verdict for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "box": [list(pair) for pair in zip(self.box.t, self.box.dt)],
            "epsilon": self.epsilon,
            "R": self.R,
            "admissible": self.admissible,
            "volume": self.volume,
            "inf_density": self.inf_density,
            "lower_bound": self.lower_bound,
            "entries": [
                {"n": e.n, "method": e.method, "p": e.estimate,
                 **({"std_err": e.std_err} if e.std_err is not None else {}),
                 "verdict": e.verdict}
                for e in self.entries
            ],
            "trend": self.trend,
        }


def distance_to_complement(box: BoxSpec) -> float:
    """Exact d(B, U^c): minimum facet distance over the box's vertices."""
    box.require_inside_u()
    t, up, k = box.t, box.upper(), box.k
    dists = [t[-1]]  # facet t_k = 0, unit normal
    for i in range(k - 1):
        dists.append((t[i] - up[i + 1]) / math.sqrt(2.0))  # facet t_i = t_{i+1}
    dists.append((1.0 - sum(up)) / math.sqrt(k))  # facet sum t_i = 1
    return min(dists)


def box_admissible(box: BoxSpec, crit: BoxCriterion) -> bool:
    """True iff R * diam(B) < d(B, U^c)."""
    if crit.k != box.k:
        raise ParameterError(f"criterion is for k={crit.k}, box has k={box.k}")
    return crit.R * box.diameter() < distance_to_complement(box)


def inf_density_on_box(table: DickmanTable, box: BoxSpec, refine: int = 4) -> float:
    """A certified lower bound on inf_B f.

    Per cell of a refine^k subdivision, bound 1/prod t_i by the right
    endpoints and rho by its value at the largest argument (all left
    endpoints; the argument decreases in every coordinate), then take the
    minimum cell bound.  Every point of B lies in some cell, so the result
    never exceeds f anywhere on B.
    """
    box.require_inside_u()
    if refine < 1:
        raise ParameterError("refine must be >= 1")
    edges = [t + np.arange(refine + 1) * (d / refine)
             for t, d in zip(box.t, box.dt)]
    lows = [m.ravel() for m in np.meshgrid(*[e[:-1] for e in edges], indexing="ij")]
    highs = [m.ravel() for m in np.meshgrid(*[e[1:] for e in edges], indexing="ij")]
    inv = np.ones_like(lows[0])
    arg_num = np.ones_like(lows[0])
    for lo, hi in zip(lows, highs):
        inv /= hi
        arg_num -= lo
    arg = arg_num / lows[-1]
    bound = float(np.min(inv * rho(table, arg)))
    crude_arg = box.u0()
    crude = rho(table, crude_arg) / math.prod(box.upper())
    # the subdivided bound can only tighten the single-cell one
    return max(bound, crude)


def run_criterion(sieve: PrimeSieve, table: DickmanTable, ladder, box: BoxSpec,
                  crit: BoxCriterion, budget: int = 10**5, seed: int = DEFAULT_SEED,
                  exact_threshold: int = 10**6, threads: int = 1) -> ConvergenceReport:
    """Evaluate P(X_n in B) along the ladder and compare against
    (1 - eps) * vol(B) * inf_B f.

    n up to exact_threshold (and within the sieve) is counted exactly; larger
    n fall back to Monte Carlo with a 4-sigma margin on the verdict.
    """
    if crit.k != box.k:
        raise ParameterError(f"criterion is for k={crit.k}, box has k={box.k}")
    box.require_inside_u()
    d = distance_to_complement(box)
    if not crit.R * box.diameter() < d:
        raise DomainError(
            f"box not admissible: R*diam(B) = {crit.R * box.diameter():.6g} "
            f"is not < d(B, U^c) = {d:.6g}")
    vol = box.volume()
    inf_f = inf_density_on_box(table, box)
    lower = (1.0 - crit.epsilon) * vol * inf_f
    entries = []
    for n in sorted(int(v) for v in ladder):
        if n <= exact_threshold and n <= sieve.limit:
            est = box_probability_exact(sieve, n, box)
            entries.append(LadderEntry(n=n, method="exact", estimate=est.value,
                                       std_err=None, verdict=est.value >= lower))
        else:
            est = sample_box_probability(sieve, n, box, budget, seed=seed,
                                         threads=threads)
            margin = STAT_MARGIN_SIGMAS * est.std_err
            entries.append(LadderEntry(n=n, method="mc", estimate=est.p_hat,
                                       std_err=est.std_err,
                                       verdict=est.p_hat >= lower - margin))
    trend = all(b.estimate >= a.estimate for a, b in zip(entries, entries[1:]))
    return ConvergenceReport(box=box, epsilon=crit.epsilon, R=crit.R,
                             admissible=True, volume=vol, inf_density=inf_f,
                             lower_bound=lower, entries=tuple(entries),
                             trend=trend)
