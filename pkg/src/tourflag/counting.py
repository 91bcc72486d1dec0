"""Induced-subtournament censuses over a host tournament.

The pure-Python scan handles any pattern size up to 5; the vectorized
path specializes to 5-vertex patterns so that hosts like the size-81
triangular blow-up (25.6M subsets) stay in the seconds range.  Both
paths produce exact integer counts per isomorphism class, keyed by the
class order of enumerate_tournaments(k).
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .errors import CapabilityError
from .tournaments import Tournament, enumerate_tournaments, pair_index, pattern_class_table

_NUMPY_CUTOVER = 300_000      # subsets; larger size-5 scans go vectorized
_PURE_BUDGET = 20_000_000     # absolute cap for the pure-Python scan


def adjacency_matrix(host: Tournament) -> np.ndarray:
    """Dense 0/1 matrix with a[u, v] = 1 iff u beats v."""
    n = host.n
    a = np.zeros((n, n), dtype=np.uint8)
    rows = host.out_rows()
    for u in range(n):
        row = rows[u]
        v = 0
        while row:
            if row & 1:
                a[u, v] = 1
            row >>= 1
            v += 1
    return a


def subset_class_counts(host: Tournament, k: int) -> tuple[int, ...]:
    """Exact count of k-subsets of the host inducing each k-vertex class."""
    if not 0 < k <= 5:
        raise CapabilityError("subset census supports pattern sizes 1..5")
    n = host.n
    if k > n:
        raise ValueError(f"pattern size {k} exceeds host size {n}")
    total = math.comb(n, k)
    if k == 5 and total > _NUMPY_CUTOVER:
        return _counts5_vectorized(host)
    if total > _PURE_BUDGET:
        raise CapabilityError(f"census over {total} subsets exceeds the scan budget")
    table = pattern_class_table(k)
    nclasses = len(enumerate_tournaments(k))
    counts = [0] * nclasses
    rows = host.out_rows()
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    for subset in combinations(range(n), k):
        key = 0
        for t, (a, b) in enumerate(pairs):
            if (rows[subset[a]] >> subset[b]) & 1:
                key |= 1 << t
        counts[table[key]] += 1
    return tuple(counts)


def _suffix_triples(n: int, j: int) -> np.ndarray:
    rest = range(j + 1, n)
    if len(rest) < 3:
        return np.empty((0, 3), dtype=np.int64)
    return np.array(list(combinations(rest, 3)), dtype=np.int64)


def _counts5_vectorized(host: Tournament) -> tuple[int, ...]:
    """Size-5 census: loop over the leading pair, vectorize the trailing
    triple.  Bit layout matches pair_index over the sorted 5-subset."""
    n = host.n
    a = adjacency_matrix(host)
    accum = np.zeros(1024, dtype=np.int64)
    tri_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for j in range(n):
        t = _suffix_triples(n, j)
        if len(t):
            bits = (
                (a[t[:, 0], t[:, 1]].astype(np.uint16) << 7)
                | (a[t[:, 0], t[:, 2]].astype(np.uint16) << 8)
                | (a[t[:, 1], t[:, 2]].astype(np.uint16) << 9)
            )
            tri_cache[j] = (t, bits)
    for i in range(n):
        for j in range(i + 1, n):
            if j not in tri_cache:
                continue
            t, bits = tri_cache[j]
            key = bits | np.uint16(a[i, j])
            key = key | (a[i, t[:, 0]].astype(np.uint16) << 1)
            key = key | (a[i, t[:, 1]].astype(np.uint16) << 2)
            key = key | (a[i, t[:, 2]].astype(np.uint16) << 3)
            key = key | (a[j, t[:, 0]].astype(np.uint16) << 4)
            key = key | (a[j, t[:, 1]].astype(np.uint16) << 5)
            key = key | (a[j, t[:, 2]].astype(np.uint16) << 6)
            accum += np.bincount(key, minlength=1024)
    table = np.array(pattern_class_table(5), dtype=np.int64)
    counts = np.zeros(len(enumerate_tournaments(5)), dtype=np.int64)
    np.add.at(counts, table, accum)
    return tuple(int(x) for x in counts)


def sample_class_counts(
    host: Tournament, samples: int, seed: int
) -> tuple[tuple[int, ...], int]:
    """Monte-Carlo census: `samples` uniform 5-subsets of the host.

    Returns (per-class hit counts, samples).  The subset stream comes from
    numpy's default generator seeded with `seed`.
    """
    n = host.n
    if n < 5:
        raise ValueError("host too small to sample 5-subsets")
    a = adjacency_matrix(host)
    table = np.array(pattern_class_table(5), dtype=np.int64)
    rng = np.random.default_rng(seed)
    accum = np.zeros(1024, dtype=np.int64)
    done = 0
    bit_positions = {
        (x, y): pair_index(x, y, 5) for x in range(5) for y in range(x + 1, 5)
    }
    while done < samples:
        chunk = min(20_000, samples - done)
        scores = rng.random((chunk, n))
        picks = np.argpartition(scores, 5, axis=1)[:, :5]
        picks.sort(axis=1)
        key = np.zeros(chunk, dtype=np.uint16)
        for x in range(5):
            for y in range(x + 1, 5):
                key |= a[picks[:, x], picks[:, y]].astype(np.uint16) << bit_positions[(x, y)]
        accum += np.bincount(key, minlength=1024)
        done += chunk
    counts = np.zeros(len(enumerate_tournaments(5)), dtype=np.int64)
    np.add.at(counts, table, accum)
    return tuple(int(x) for x in counts), samples
