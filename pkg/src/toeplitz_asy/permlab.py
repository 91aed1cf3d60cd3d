"""Longest-increasing-subsequence machinery.

Patience sorting and the exhaustive S_N enumeration are the hot loops; both
are numba kernels with the usual interpreted fallback (count_u additionally
falls back to itertools + bisect, which is far faster than interpreting the
enumeration kernel).

Randomness contract: trial i of sample_scaled_lis draws its permutation from
numpy's PCG64 seeded with SeedSequence(seed, spawn_key=(i,)).  Streams are
therefore reproducible bit-exactly, independent of batch size or worker
count, and the seed is the only state a report needs to cite.
"""

import bisect
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._accel import USING_NUMBA, njit
from .detcore import gessel_det
from .errors import InvalidPermutationError, SizeError

EXHAUSTIVE_LIMIT = 10


@dataclass(frozen=True)
class Permutation:
    entries: tuple

    def __post_init__(self):
        n = len(self.entries)
        if sorted(self.entries) != list(range(1, n + 1)):
            raise InvalidPermutationError("entries are not a permutation of 1..N")

    @property
    def n(self):
        return len(self.entries)

    def reversed(self):
        return Permutation(tuple(reversed(self.entries)))


@njit(cache=True)
def _lis_batch(perms):  # pragma: no cover - covered via lis_length/sampling
    trials, n = perms.shape
    out = np.empty(trials, dtype=np.int64)
    tops = np.empty(n, dtype=np.int64)
    for b in range(trials):
        piles = 0
        for idx in range(n):
            x = perms[b, idx]
            lo, hi = 0, piles
            while lo < hi:
                mid = (lo + hi) >> 1
                if tops[mid] < x:
                    lo = mid + 1
                else:
                    hi = mid
            tops[lo] = x
            if lo == piles:
                piles += 1
        out[b] = piles
    return out


@njit(cache=True)
def _lis_histogram_kernel(n):  # pragma: no cover - covered via count_u
    arr = np.arange(n, dtype=np.int64)
    counters = np.zeros(n, dtype=np.int64)
    hist = np.zeros(n + 1, dtype=np.int64)
    tops = np.empty(n, dtype=np.int64)

    piles = 0
    for idx in range(n):
        x = arr[idx]
        lo, hi = 0, piles
        while lo < hi:
            mid = (lo + hi) >> 1
            if tops[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        tops[lo] = x
        if lo == piles:
            piles += 1
    hist[piles] += 1

    i = 0
    while i < n:
        if counters[i] < i:
            j = 0 if i % 2 == 0 else counters[i]
            tmp = arr[j]
            arr[j] = arr[i]
            arr[i] = tmp
            piles = 0
            for idx in range(n):
                x = arr[idx]
                lo, hi = 0, piles
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if tops[mid] < x:
                        lo = mid + 1
                    else:
                        hi = mid
                tops[lo] = x
                if lo == piles:
                    piles += 1
            hist[piles] += 1
            counters[i] += 1
            i = 0
        else:
            counters[i] = 0
            i += 1
    return hist


def _lis_histogram_python(n):
    hist = np.zeros(n + 1, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        tops = []
        for x in perm:
            i = bisect.bisect_left(tops, x)
            if i == len(tops):
                tops.append(x)
            else:
                tops[i] = x
        hist[len(tops)] += 1
    return hist


@lru_cache(maxsize=EXHAUSTIVE_LIMIT + 1)
def lis_histogram(n):
    """Counts of permutations of S_n by LIS length (exhaustive, n <= 10)."""
    if n > EXHAUSTIVE_LIMIT:
        raise SizeError(f"exhaustive enumeration capped at N={EXHAUSTIVE_LIMIT}")
    if n == 0:
        return np.array([1], dtype=np.int64)
    if USING_NUMBA:
        return _lis_histogram_kernel(n)
    return _lis_histogram_python(n)


def lis_length(perm):
    """Length of a longest increasing subsequence, by patience sorting."""
    if isinstance(perm, Permutation):
        entries = np.asarray(perm.entries, dtype=np.int64)
    else:
        entries = np.asarray(Permutation(tuple(perm)).entries, dtype=np.int64)
    return int(_lis_batch(entries[None, :])[0])


def count_u(n, big_n):
    """u_n(N): number of permutations in S_N with LIS length <= n (N <= 10)."""
    if big_n > EXHAUSTIVE_LIMIT:
        raise SizeError(f"count_u is exhaustive; N={big_n} exceeds {EXHAUSTIVE_LIMIT}")
    hist = lis_histogram(big_n)
    return int(hist[: min(n, big_n) + 1].sum())


@dataclass(frozen=True)
class GesselCheck:
    determinant: float
    series: float
    residual: float
    tail_bound: float


def gessel_check(n, lam, n_max=EXHAUSTIVE_LIMIT):
    """Compare D_n(exp(sqrt(lam)(z+1/z))) with sum_N u_n(N) lam^N / (N!)^2.

    The truncation tail is bounded by u_n(N) <= N!:
    sum_{N > M} lam^N / N! <= lam^{M+1} e^lam / (M+1)!.
    """
    if n_max > EXHAUSTIVE_LIMIT:
        raise SizeError(f"N_max={n_max} exceeds {EXHAUSTIVE_LIMIT}")
    lhs = gessel_det(n, lam)
    rhs = sum(
        count_u(n, big_n) * lam**big_n / math.factorial(big_n) ** 2
        for big_n in range(0, n_max + 1)
    )
    tail = lam ** (n_max + 1) * math.exp(lam) / math.factorial(n_max + 1)
    return GesselCheck(lhs, rhs, abs(lhs - rhs), tail)


@dataclass(frozen=True, eq=False)
class LisSample:
    n: int
    trials: int
    seed: int
    scaled_values: np.ndarray

    def lengths(self):
        return np.round(self.scaled_values * self.n ** (1.0 / 6.0) + 2.0 * math.sqrt(self.n)).astype(int)


def _trial_generator(seed, index):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def sample_scaled_lis(big_n, trials, seed, batch=None):
    """Monte Carlo sample of (l_N - 2 sqrt(N)) N^{-1/6} over uniform permutations."""
    if big_n > 1_000_000 or trials > 1_000_000:
        raise SizeError("desk scale: N and trials are capped at 1e6")
    if batch is None:
        batch = max(1, min(trials, 4_000_000 // max(big_n, 1)))
    lengths = np.empty(trials, dtype=np.int64)
    buf = np.empty((batch, big_n), dtype=np.int64)
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        for i in range(b):
            rng = _trial_generator(seed, done + i)
            buf[i, :] = rng.permutation(big_n)
        lengths[done : done + b] = _lis_batch(buf[:b])
        done += b
    scaled = (lengths - 2.0 * math.sqrt(big_n)) * big_n ** (-1.0 / 6.0)
    return LisSample(big_n, trials, seed, scaled)


def ecdf_sup_distance(sample, cdf, lo=-4.0, hi=2.0, mode="lattice", points=121):
    """sup |empirical CDF - cdf| over the window [lo, hi].

    The LIS length is an integer, so the scaled statistic lives on a lattice
    of spacing N^{-1/6} (0.25 at N = 4096) and its CDF is a staircase.
    mode="lattice" (default) evaluates the difference at the jump points,
    i.e. |P(l <= k) - F(v_k)| at the exact scaled values v_k; this is the
    standard statistic for a lattice variable against a continuous limit.
    mode="grid" evaluates on a uniform s-grid instead, which additionally
    picks up the irreducible staircase gap of about half a lattice step.
    """
    vals = np.sort(sample.scaled_values)
    if mode == "lattice":
        grid = np.unique(vals)
        grid = grid[(grid >= lo) & (grid <= hi)]
    elif mode == "grid":
        grid = np.linspace(lo, hi, points)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    emp = np.searchsorted(vals, grid, side="right") / len(vals)
    ref = np.array([cdf(s) for s in grid])
    return float(np.max(np.abs(emp - ref)))
