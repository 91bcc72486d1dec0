"""Census engines: the vectorized path must agree with the plain scan."""

import math

import pytest

from tourflag.counting import (
    _counts5_vectorized,
    adjacency_matrix,
    sample_class_counts,
    subset_class_counts,
)
from tourflag.errors import CapabilityError
from tourflag.tournaments import (
    enumerate_tournaments,
    generate_carousel,
    generate_random,
    generate_triangular,
)


@pytest.mark.parametrize(
    "host",
    [
        generate_carousel(11),
        generate_carousel(21),
        generate_triangular(27),
        generate_random(18, 5),
        generate_random(6, 2),
    ],
    ids=["R_11", "R_21", "tri_27", "random_18", "random_6"],
)
def test_vectorized_census_matches_plain_scan(host):
    plain = subset_class_counts(host, 5)
    fast = _counts5_vectorized(host)
    assert plain == fast
    assert sum(plain) == math.comb(host.n, 5)


def test_census_totals_per_pattern_size():
    host = generate_random(10, 4)
    for k in range(1, 6):
        counts = subset_class_counts(host, k)
        assert len(counts) == len(enumerate_tournaments(k))
        assert sum(counts) == math.comb(10, k)


def test_census_rejects_large_patterns():
    with pytest.raises(CapabilityError):
        subset_class_counts(generate_random(10, 1), 6)


def test_adjacency_matrix_shape_and_complement():
    host = generate_random(9, 3)
    a = adjacency_matrix(host)
    assert a.shape == (9, 9)
    for u in range(9):
        assert a[u, u] == 0
        for v in range(u + 1, 9):
            assert a[u, v] + a[v, u] == 1


def test_sampling_is_deterministic_and_totals():
    host = generate_random(50, 9)
    counts1, n1 = sample_class_counts(host, 30_000, seed=4)
    counts2, n2 = sample_class_counts(host, 30_000, seed=4)
    assert counts1 == counts2 and n1 == n2 == 30_000
    assert sum(counts1) == 30_000
    counts3, _ = sample_class_counts(host, 30_000, seed=5)
    assert counts3 != counts1
