"""Counting y-smooth integers: Psi(x, y) by two independent exact routes plus
the Dickman approximation x * rho(log x / log y).

psi_bruteforce scans largest prime factors off a sieve; psi_exact runs the
Buchstab-style recursion Psi(x, p_j) = Psi(x, p_{j-1}) + Psi(x // p_j, p_j)
with a bounded memo.  The two never share counting logic, so each serves as
the other's oracle.  All quotient arithmetic is exact integer division.

Feasibility: the recursion handles x up to ~10^12 when y is moderate (a few
thousand); for y near sqrt(x) it switches to the identity
Psi(x, y) = x - sum_{y < p <= x} floor(x/p), which needs the primes up to x
and is therefore capped at x <= 10^8.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .dickman import DickmanTable, rho
from .errors import DomainError, ParameterError, ResourceError
from .primes import PrimeSieve

#: never sieve the internal prime list beyond this
PRIME_CAP = 10**8

_MEMO_ENTRIES = 1 << 20

# internal prime list (independent of PrimeSieve): plain Eratosthenes
_plimit = 0
_parr = np.empty(0, dtype=np.int64)
_plist: list[int] = []


def _ensure_primes(limit: int) -> None:
    global _plimit, _parr, _plist
    if limit <= _plimit:
        return
    if limit > PRIME_CAP:
        raise ResourceError(f"prime list to {limit} exceeds cap {PRIME_CAP}")
    limit = max(limit, 1 << 16)
    comp = np.zeros(limit + 1, dtype=bool)
    comp[:2] = True
    for p in range(2, math.isqrt(limit) + 1):
        if not comp[p]:
            comp[p * p:: p] = True
    _parr = np.flatnonzero(~comp).astype(np.int64)
    _plist = _parr.tolist()
    _plimit = limit


def _count_with_one_large_factor(x: int, p: int) -> int:
    """Psi(x, p) when (p+1)^2 > x: every non-smooth m <= x has exactly one
    prime factor above p, so subtract sum floor(x/q) over p < q <= x."""
    a = int(np.searchsorted(_parr, p, side="right"))
    b = int(np.searchsorted(_parr, x, side="right"))
    if a == b:
        return x
    return x - int(np.sum(x // _parr[a:b]))


def _psi_rec_impl(x: int, j: int) -> int:
    """Count of m <= x whose prime factors all lie among the first j primes."""
    total = 0
    i = j
    while True:
        p = _plist[i - 1]
        if p >= x:
            total += x
            break
        if (p + 1) * (p + 1) > x and x <= _plimit:
            total += _count_with_one_large_factor(x, p)
            break
        if i == 1:
            total += x.bit_length()  # powers of two up to x, including 1
            break
        total += _psi_rec(x // p, i)
        i -= 1
    return total


_psi_rec = lru_cache(maxsize=_MEMO_ENTRIES)(_psi_rec_impl)


def configure_psi_memo(max_entries: int) -> None:
    """Re-bound the recursion memo (least-recently-used eviction)."""
    global _psi_rec
    _psi_rec = lru_cache(maxsize=max_entries)(_psi_rec_impl)


def psi_exact(x: int, y: int) -> int:
    """Number of y-smooth integers in [1, x], by the memoized recursion."""
    x, y = int(x), int(y)
    if x < 0:
        raise ParameterError("x must be non-negative")
    if x < 1:
        return 0
    if y < 1:
        raise ParameterError("y must be >= 1")
    if y >= x:
        return x
    if y < 2:
        return 1
    if (y + 1) * (y + 1) > x:
        if x <= PRIME_CAP:
            _ensure_primes(x)
            return _count_with_one_large_factor(x, y)
        raise ResourceError(
            f"y near sqrt(x) needs the primes up to x={x}, beyond cap {PRIME_CAP}")
    # recursion: cover primes to y, plus headroom so subcalls can use the
    # one-large-factor shortcut whenever x' < (y+1)^2
    _ensure_primes(min(max(y + 1, min((y + 1) * (y + 1), x)), PRIME_CAP))
    j = int(np.searchsorted(_parr, y, side="right"))
    if j == 0:
        return 1
    return _psi_rec(x, j)


def psi_bruteforce(sieve: PrimeSieve, x: int, y: int) -> int:
    """Psi(x, y) by scanning the sieve's largest-prime-factor table.

    m = 1 counts (it has no prime factor at all).
    """
    x, y = int(x), int(y)
    if x < 1 or y < 1:
        raise ParameterError("need x >= 1 and y >= 1")
    if x > sieve.limit:
        raise DomainError(f"x={x} beyond sieve limit {sieve.limit}")
    lpf = sieve.largest_prime_factor_table()
    return int(np.count_nonzero(lpf[1: x + 1] <= y))


def psi_dickman(table: DickmanTable, x: float, y: float) -> float:
    """Dickman's approximation x * rho(log x / log y) of Psi(x, y)."""
    if not (x >= y >= 2):
        raise ParameterError("need x >= y >= 2")
    u = math.log(x) / math.log(y)
    if u > table.u_max:
        raise DomainError(
            f"log x / log y = {u:.3f} beyond table u_max {table.u_max}; "
            "build a larger table")
    return x * rho(table, u)
