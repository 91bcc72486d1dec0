"""Decomposability recognizer vs scanner, skewness, and the limit machinery."""

import math
import random
from fractions import Fraction as F
from itertools import combinations

import pytest

from tourflag.errors import CapabilityError
from tourflag.structures import (
    DecompositionTree,
    EmpiricalPoint,
    ForbiddenWitness,
    c3_decompose,
    carousel_t5_12_sum,
    check_tree,
    count_embeddings,
    empirical_limit,
    is_c3_decomposable,
    is_k_equally,
    is_locally_transitive,
    phi_qr_value,
    scan_forbidden,
    skewness,
    triangular_t5_9_count,
)
from tourflag.flags import density
from tourflag.tournaments import (
    are_isomorphic,
    aut_count,
    canonical_form,
    catalog_lookup,
    enumerate_tournaments,
    generate_carousel,
    generate_random,
    generate_transitive,
    generate_triangular,
    subtournament,
)


def test_transitive_decomposes_to_singleton_chain():
    tree = c3_decompose(generate_transitive(5))
    assert isinstance(tree, DecompositionTree)
    assert check_tree(generate_transitive(5), tree)
    node = tree
    depth = 0
    while not node.is_leaf():
        assert node.a is not None and len(node.a.vertices) == 1
        assert node.c is None
        node = node.b
        depth += 1
    assert depth == 4


def test_carousel_5_yields_whole_set_witness():
    res = c3_decompose(generate_carousel(5))
    assert isinstance(res, ForbiddenWitness)
    assert res.pattern == "T5^12"
    assert res.subset == (0, 1, 2, 3, 4)
    pat = catalog_lookup("T5^12")
    host = generate_carousel(5)
    for i in range(5):
        for j in range(5):
            if i != j:
                assert pat.beats(i, j) == host.beats(res.embedding[i], res.embedding[j])


def test_triangular_9_top_split():
    t9 = generate_triangular(9)
    tree = c3_decompose(t9)
    assert isinstance(tree, DecompositionTree)
    assert check_tree(t9, tree)
    assert sorted(len(p.vertices) for p in tree.parts() if p) == [3, 3, 3]
    for child in tree.parts():
        assert sorted(len(p.vertices) if p else 0 for p in child.parts()) == [1, 1, 1]


def test_scan_forbidden_examples():
    assert scan_forbidden(generate_triangular(27)) == []
    hits = scan_forbidden(catalog_lookup("T5^8"))
    assert len(hits) == 1 and hits[0].pattern == "T5^8"
    bad = {i for i in range(1, 13) if scan_forbidden(catalog_lookup(f"T5^{i}"))}
    assert bad == {8, 10, 12}
    assert scan_forbidden(generate_transitive(4)) == []


def test_witness_validity_on_random_hosts():
    rng = random.Random(19)
    for _ in range(60):
        t = generate_random(rng.randint(5, 7), rng.randint(0, 10**6))
        for w in scan_forbidden(t):
            induced = subtournament(t, w.subset)
            assert are_isomorphic(induced, catalog_lookup(w.pattern))
            pat = catalog_lookup(w.pattern)
            for i in range(5):
                for j in range(5):
                    if i != j:
                        assert pat.beats(i, j) == t.beats(w.embedding[i], w.embedding[j])


def test_recognizer_equals_scanner_up_to_size_7():
    for n in range(1, 8):
        for t in enumerate_tournaments(n):
            res = c3_decompose(t)
            clean = not scan_forbidden(t)
            assert isinstance(res, DecompositionTree) == clean, t.encode()
            if isinstance(res, DecompositionTree):
                assert check_tree(t, res)
            else:
                assert are_isomorphic(
                    subtournament(t, res.subset), catalog_lookup(res.pattern)
                )


def test_decomposability_is_hereditary():
    for n in range(2, 7):
        for t in enumerate_tournaments(n):
            if not is_c3_decomposable(t):
                continue
            for m in range(1, n):
                for sub in combinations(range(n), m):
                    assert is_c3_decomposable(subtournament(t, sub))


def test_skewness_of_balanced_blowups():
    for k in range(1, 4):
        tree = c3_decompose(generate_triangular(3**k))
        assert isinstance(tree, DecompositionTree)
        for level in range(k + 1):
            assert skewness(tree, level) == 0, (k, level)


def test_skewness_of_near_equal_split():
    tree = c3_decompose(generate_triangular(4))
    assert isinstance(tree, DecompositionTree)
    assert sorted(len(p.vertices) if p else 0 for p in tree.parts()) == [1, 1, 2]
    assert skewness(tree, 1) == 1


def test_k_equally_blowups():
    assert is_k_equally(generate_triangular(9), 2)
    assert is_k_equally(generate_triangular(4), 1)
    assert is_k_equally(generate_triangular(8), 2)
    assert is_k_equally(generate_triangular(7), 2)


def test_k_equally_uniqueness_small():
    # sizes n <= 3^k: the balanced blow-up is the only k-equally class
    for n, k in [(4, 1), (5, 2), (6, 2), (7, 2)]:
        winners = [t for t in enumerate_tournaments(n) if is_k_equally(t, k)]
        assert len(winners) == 1, (n, k)
        assert are_isomorphic(winners[0], generate_triangular(n))


def test_phi_qr_values():
    assert phi_qr_value(generate_transitive(2)) == 1
    assert phi_qr_value(catalog_lookup("T5^8")) == F(15, 128)
    assert aut_count(catalog_lookup("T5^8")) == 1
    assert phi_qr_value(generate_carousel(3)) == F(1, 4)
    # phi_qr sums to 1 over each exhaustive level
    for n in range(1, 6):
        assert sum(phi_qr_value(t) for t in enumerate_tournaments(n)) == 1


def test_local_transitivity_classes():
    lt = {i for i in range(1, 13) if is_locally_transitive(catalog_lookup(f"T5^{i}"))}
    assert lt == {1, 7, 9, 12}
    for i in sorted(lt):
        t = catalog_lookup(f"T5^{i}")
        assert density(catalog_lookup("W4"), t) == 0
        assert density(catalog_lookup("L4"), t) == 0


def test_triangular_t5_9_count_recursion():
    assert triangular_t5_9_count(1) == 0
    assert triangular_t5_9_count(2) == 81
    assert triangular_t5_9_count(3) == 35235


def test_triangular_count_matches_brute_force_embeddings():
    assert count_embeddings(catalog_lookup("T5^9"), generate_triangular(9)) == 81
    # the labelled-count identity p = F(k) 5!/(3^k)_5 at k = 2
    f2 = triangular_t5_9_count(2)
    host = generate_triangular(9)
    expected = F(f2 * math.factorial(5), math.perm(9, 5))
    assert density(catalog_lookup("T5^9"), host) == expected


def test_carousel_sum_values_and_asymptotics():
    assert carousel_t5_12_sum(3) == 63
    # oracle-computed gaps |4! sum / (2n+1)_5 - 1/16|: ~0.01185 at n=50,
    # ~0.00577 at n=100, decaying like 1/n
    gap50 = abs(F(math.factorial(4) * carousel_t5_12_sum(50), math.perm(101, 5)) - F(1, 16))
    gap100 = abs(F(math.factorial(4) * carousel_t5_12_sum(100), math.perm(201, 5)) - F(1, 16))
    assert F(1, 100) < gap50 < F(12, 1000)
    assert gap100 < F(6, 1000) < gap50
    # finite-n deviation from the true embedding count, recorded not zero:
    # the closed sum gives 63 at n=3 while brute force finds 35
    assert count_embeddings(generate_carousel(5), generate_carousel(7)) == 35


def test_empirical_limit_carousel_exact_values():
    points = empirical_limit("carousel", catalog_lookup("T5^12"), [11, 21])
    assert points == [
        EmpiricalPoint(11, F(1, 6)),
        EmpiricalPoint(21, F(33, 323)),
    ]
    with pytest.raises(ValueError):
        empirical_limit("carousel", catalog_lookup("T5^12"), [10])


def test_empirical_limit_triangular_approaches_three_eighths():
    points = empirical_limit("triangular", catalog_lookup("T5^9"), [9, 27])
    gaps = [abs(p.density - F(3, 8)) for p in points]
    assert gaps[0] > gaps[1]
    assert points[1].density == F(261, 598)


def test_empirical_limit_random_reports_samples():
    (point,) = empirical_limit(
        "random", catalog_lookup("T5^8"), [60], seed=11, samples=5000
    )
    assert point.samples == 5000
    assert 0 < point.density < 1


def test_empirical_limit_unknown_family():
    with pytest.raises(ValueError):
        empirical_limit("ladder", catalog_lookup("T5^8"), [10])


def test_tree_json_schema():
    tree = c3_decompose(generate_triangular(4))
    payload = tree.to_json()
    assert set(payload) == {"vertices", "A", "B", "C"}
    wit = c3_decompose(generate_carousel(5))
    assert set(wit.to_json()) == {"pattern", "subset", "embedding"}
