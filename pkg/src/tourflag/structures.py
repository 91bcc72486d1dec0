"""Cycle-blow-up decomposability, forbidden-pattern scanning and limit runs.

A tournament is C3-decomposable when its vertex set splits into parts
(A, B, C), C possibly empty, with every arc of A x B, B x C and C x A
present and each part recursively decomposable.  The constructive
recognizer below follows the inductive argument that characterizes these
tournaments as exactly the ones avoiding T5^8, T5^10 and T5^12: it picks
a 3-cycle (a, b, c) minimizing |V_abc ∪ V_empty|, classifies every other
vertex by its arcs to {a, b, c}, checks eight families of arc conditions,
and converts any violation into an explicit forbidden 5-vertex witness.

The scanner over all 5-subsets is an independent oracle; the recognizer
never calls it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .counting import sample_class_counts, subset_class_counts
from .errors import CapabilityError
from .flags import density
from .tournaments import (
    Tournament,
    aut_count,
    canonical_form,
    catalog_lookup,
    enumerate_tournaments,
    find_isomorphism,
    generate_carousel,
    generate_random,
    generate_triangular,
    subtournament,
)

FORBIDDEN_PATTERNS = ("T5^8", "T5^10", "T5^12")


@dataclass(frozen=True)
class DecompositionTree:
    """Recursive (A, B, C) split; leaves hold at most one vertex.

    Children exist for every nonempty part (singleton parts are leaf
    children), so `a`/`b`/`c` are None exactly for empty parts.
    """

    vertices: tuple[int, ...]
    a: "DecompositionTree | None" = None
    b: "DecompositionTree | None" = None
    c: "DecompositionTree | None" = None

    def parts(self) -> tuple["DecompositionTree | None", ...]:
        return (self.a, self.b, self.c)

    def is_leaf(self) -> bool:
        return self.a is None and self.b is None and self.c is None

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "A": self.a.to_json() if self.a else None,
            "B": self.b.to_json() if self.b else None,
            "C": self.c.to_json() if self.c else None,
        }


@dataclass(frozen=True)
class ForbiddenWitness:
    """A 5-subset inducing one of the forbidden patterns.

    embedding[i] is the host vertex playing pattern vertex i (the pattern
    is the catalog tournament named by `pattern`).
    """

    subset: tuple[int, ...]
    pattern: str
    embedding: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "pattern": self.pattern,
            "subset": list(self.subset),
            "embedding": list(self.embedding),
        }


def _witness(t: Tournament, verts: tuple[int, ...], pattern: str) -> ForbiddenWitness:
    subset = tuple(sorted(verts))
    induced = subtournament(t, subset)
    iso = find_isomorphism(catalog_lookup(pattern), induced)
    assert iso is not None, f"claimed {pattern} witness does not match"
    return ForbiddenWitness(subset, pattern, tuple(subset[iso[i]] for i in range(5)))


# The eight arc-condition families.  Each entry: the two vertex-class keys
# (X, Y) with X x Y required in A(T), the pattern exhibited by a violating
# pair (u in X beaten by w in Y), and the five witness vertices in terms of
# the current rotation (a, b, c) and the violating pair.
_CONDITIONS = (
    ("ab", "bc", "T5^10", lambda a, b, c, u, w: (a, u, w, b, c)),
    ("a", "b", "T5^10", lambda a, b, c, u, w: (b, w, c, u, a)),
    ("a", "ab", "T5^8", lambda a, b, c, u, w: (c, w, a, u, b)),
    ("ab", "c", "T5^12", lambda a, b, c, u, w: (a, b, w, c, u)),
    ("abc", "a", "T5^10", lambda a, b, c, u, w: (w, c, u, a, b)),
    ("abc", "ab", "T5^8", lambda a, b, c, u, w: (w, u, b, a, c)),
    ("a", "empty", "T5^8", lambda a, b, c, u, w: (b, c, u, w, a)),
    ("ab", "empty", "T5^10", lambda a, b, c, u, w: (b, a, c, w, u)),
)

_ROTATE_KEY = {
    "a": "b", "b": "c", "c": "a",
    "ab": "bc", "bc": "ac", "ac": "ab",
    "abc": "abc", "empty": "empty",
}


def _classify(t: Tournament, verts: list[int], a: int, b: int, c: int) -> dict[str, list[int]]:
    sets: dict[str, list[int]] = {
        key: [] for key in ("abc", "ab", "bc", "ac", "a", "b", "c", "empty")
    }
    for v in verts:
        if v in (a, b, c):
            continue
        ba, bb, bc_ = t.beats(v, a), t.beats(v, b), t.beats(v, c)
        key = {
            (True, True, True): "abc",
            (True, True, False): "ab",
            (False, True, True): "bc",
            (True, False, True): "ac",
            (True, False, False): "a",
            (False, True, False): "b",
            (False, False, True): "c",
            (False, False, False): "empty",
        }[(ba, bb, bc_)]
        sets[key].append(v)
    return sets


def c3_decompose(t: Tournament) -> DecompositionTree | ForbiddenWitness:
    """Constructive recognizer: a decomposition tree, or a forbidden witness."""

    def rec(verts: tuple[int, ...]) -> DecompositionTree | ForbiddenWitness:
        n = len(verts)
        if n <= 1:
            return DecompositionTree(verts)

        cycles = []
        for x, y, z in combinations(verts, 3):
            if t.beats(x, y):
                if t.beats(y, z) and t.beats(z, x):
                    cycles.append((x, y, z))
            elif t.beats(x, z) and t.beats(z, y):
                cycles.append((x, z, y))

        if not cycles:
            # transitive: split off the vertex of maximum out-degree
            top = max(verts, key=lambda v: sum(1 for w in verts if w != v and t.beats(v, w)))
            rest = tuple(v for v in verts if v != top)
            sub_b = rec(rest)
            assert isinstance(sub_b, DecompositionTree)
            return DecompositionTree(verts, DecompositionTree((top,)), sub_b, None)

        def badness(cycle):
            a, b, c = cycle
            value = 0
            for v in verts:
                if v in cycle:
                    continue
                ba, bb, bc_ = t.beats(v, a), t.beats(v, b), t.beats(v, c)
                if ba == bb == bc_:
                    value += 1
            return value

        a, b, c = min(cycles, key=lambda cyc: (badness(cyc), tuple(sorted(cyc))))
        sets = _classify(t, list(verts), a, b, c)

        roles = {"a": a, "b": b, "c": c}
        for first_key, second_key, pattern, builder in _CONDITIONS:
            fk, sk = first_key, second_key
            ra, rb, rc = "a", "b", "c"
            for _ in range(3):
                for u in sorted(sets[fk]):
                    for w in sorted(sets[sk]):
                        if t.beats(w, u):
                            return _witness(
                                t, builder(roles[ra], roles[rb], roles[rc], u, w), pattern
                            )
                fk, sk = _ROTATE_KEY[fk], _ROTATE_KEY[sk]
                ra, rb, rc = rb, rc, ra

        # guaranteed by the minimizing choice of (a, b, c), not by
        # pattern-freeness; a failure here would be an implementation bug
        for u in sets["abc"]:
            for w in sets["empty"]:
                assert t.beats(u, w), "minimal 3-cycle violates V_abc x V_empty"

        if sets["abc"]:
            part_a = tuple(sorted(sets["abc"]))
            part_b = tuple(v for v in verts if v not in sets["abc"])
            split = (part_a, part_b, ())
        elif sets["empty"]:
            part_b = tuple(sorted(sets["empty"]))
            part_a = tuple(v for v in verts if v not in sets["empty"])
            split = (part_a, part_b, ())
        else:
            split = (
                tuple(sorted([a] + sets["b"] + sets["ab"])),
                tuple(sorted([b] + sets["c"] + sets["bc"])),
                tuple(sorted([c] + sets["a"] + sets["ac"])),
            )

        children = []
        for part in split:
            if not part:
                children.append(None)
                continue
            sub = rec(part)
            if isinstance(sub, ForbiddenWitness):
                return sub
            children.append(sub)
        return DecompositionTree(verts, *children)

    return rec(tuple(range(t.n)))


def check_tree(t: Tournament, tree: DecompositionTree) -> bool:
    """Independent validator: parts partition the node, are strictly smaller,
    carry all cyclic arcs, and recurse correctly."""
    if tree.is_leaf():
        return len(tree.vertices) <= 1
    parts = [p.vertices if p else () for p in tree.parts()]
    joined: list[int] = [v for part in parts for v in part]
    if sorted(joined) != sorted(tree.vertices):
        return False
    if any(len(p) >= len(tree.vertices) for p in parts):
        return False
    for i in range(3):
        for u in parts[i]:
            for w in parts[(i + 1) % 3]:
                if not t.beats(u, w):
                    return False
    return all(p is None or check_tree(t, p) for p in tree.parts())


def scan_forbidden(t: Tournament) -> list[ForbiddenWitness]:
    """Exhaustive 5-subset scan against the three forbidden patterns."""
    if t.n < 5:
        return []
    classes = enumerate_tournaments(5)
    bad_index = {}
    for name in FORBIDDEN_PATTERNS:
        target = canonical_form(catalog_lookup(name))
        bad_index[next(i for i, x in enumerate(classes) if x == target)] = name
    from .tournaments import pattern_class_table

    table = pattern_class_table(5)
    rows = t.out_rows()
    pairs = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    out = []
    for subset in combinations(range(t.n), 5):
        key = 0
        for pos, (a, b) in enumerate(pairs):
            if (rows[subset[a]] >> subset[b]) & 1:
                key |= 1 << pos
        name = bad_index.get(table[key])
        if name is not None:
            out.append(_witness(t, subset, name))
    return out


def is_c3_decomposable(t: Tournament) -> bool:
    return isinstance(c3_decompose(t), DecompositionTree)


# --- skewness and k-equally decomposability ------------------------------------


def skewness(tree: DecompositionTree, k: int) -> int:
    """Delta_k: max minus min part size over all 3^k index sequences.

    Nodes holding at most one vertex push their content into the first
    child; absent parts count as size 0.
    """
    if k < 0:
        raise ValueError("level must be nonnegative")
    level: list[DecompositionTree | None] = [tree]
    for _ in range(k):
        nxt: list[DecompositionTree | None] = []
        for node in level:
            if node is None:
                nxt.extend((None, None, None))
            elif node.is_leaf():
                nxt.extend((node, None, None))
            else:
                nxt.extend(node.parts())
        level = nxt
    sizes = [len(node.vertices) if node else 0 for node in level]
    return max(sizes) - min(sizes)


K_EQUALLY_MAX = 15


def is_k_equally(t: Tournament, k: int, _memo: dict | None = None) -> bool:
    """Search for a decomposition whose top k levels all have skewness <= 1.

    The near-equal size multiset is forced; the search ranges over the
    cyclic assignments of vertex subsets to (A, B, C) and recurses.
    """
    if k < 0:
        raise ValueError("level must be nonnegative")
    if t.n > K_EQUALLY_MAX:
        raise CapabilityError(f"k-equally search capped at {K_EQUALLY_MAX} vertices")
    if _memo is None:
        _memo = {}
    if t.n <= 1:
        return True
    if k == 0:
        return is_c3_decomposable(t)
    c = canonical_form(t) if t.n <= 9 else t
    key = (c.n, c.mask, k)
    if key in _memo:
        return _memo[key]
    n = t.n
    base, rem = divmod(n, 3)
    triple = tuple(base + (1 if i < rem else 0) for i in range(3))
    from itertools import permutations as perms

    verts = list(range(n))
    result = False
    for sa, sb, sc in sorted(set(perms(triple))):
        if max(sa, sb, sc) >= n:
            continue
        for aset in combinations(verts, sa):
            rest = [v for v in verts if v not in set(aset)]
            for bset in combinations(rest, sb):
                cset = tuple(v for v in rest if v not in set(bset))
                if not _cyclic_arcs_ok(t, aset, bset, cset):
                    continue
                if all(
                    is_k_equally(subtournament(t, part), k - 1, _memo)
                    for part in (aset, bset, cset)
                ):
                    result = True
                    break
            if result:
                break
        if result:
            break
    _memo[key] = result
    return result


def _cyclic_arcs_ok(t: Tournament, aset, bset, cset) -> bool:
    for xs, ys in ((aset, bset), (bset, cset), (cset, aset)):
        for u in xs:
            for w in ys:
                if not t.beats(u, w):
                    return False
    return True


# --- quasi-random value and limit computations -----------------------------------


def phi_qr_value(t: Tournament) -> Fraction:
    """Density of t in the random-tournament limit: n!/(|Aut| 2^C(n,2))."""
    n = t.n
    return Fraction(math.factorial(n), aut_count(t) * 2 ** (n * (n - 1) // 2))


@dataclass(frozen=True)
class EmpiricalPoint:
    size: int
    density: Fraction
    samples: int | None = None


KNOWN_LIMITS = {
    ("carousel", "T5^7"): Fraction(5, 16),
    ("carousel", "T5^12"): Fraction(1, 16),
    ("triangular", "T5^9"): Fraction(3, 8),
    ("triangular", "T5^11"): Fraction(1, 16),
    ("random", "T5^8"): Fraction(15, 128),
}


def empirical_limit(
    family: str,
    target: Tournament,
    sizes: list[int],
    seed: int | None = None,
    samples: int = 100_000,
) -> list[EmpiricalPoint]:
    """Densities of the target along one extremal family.

    Carousel and triangular hosts are counted exactly; the random family
    is Monte Carlo (host built from `seed`, sample count recorded).
    On budget exhaustion the partial results ride on the CapabilityError.
    """
    if family not in ("carousel", "triangular", "random"):
        raise ValueError(f"unknown family {family!r}")
    out: list[EmpiricalPoint] = []
    for size in sizes:
        try:
            if family == "carousel":
                host = generate_carousel(size)
                out.append(EmpiricalPoint(size, density(target, host)))
            elif family == "triangular":
                host = generate_triangular(size)
                out.append(EmpiricalPoint(size, density(target, host)))
            else:
                if seed is None:
                    raise ValueError("random family requires a seed")
                host = generate_random(size, seed)
                if target.n != 5:
                    raise CapabilityError("random-family sampling handles size-5 targets")
                counts, n_done = sample_class_counts(host, samples, seed)
                classes = enumerate_tournaments(5)
                tgt = canonical_form(target)
                idx = next(i for i, x in enumerate(classes) if x == tgt)
                out.append(EmpiricalPoint(size, Fraction(counts[idx], n_done), n_done))
        except CapabilityError as exc:
            raise CapabilityError(str(exc), partial=out) from exc
    return out


def triangular_t5_9_count(k: int) -> int:
    """Embedding count F(k) of the 5-cycle-with-chords pattern into the
    size-3^k blow-up: F(1) = 0, F(k) = 3 C(3^(k-1), 2)^2 3^(k-1) + 3 F(k-1)."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return 0
    prev = triangular_t5_9_count(k - 1)
    m = 3 ** (k - 1)
    return 3 * math.comb(m, 2) ** 2 * m + 3 * prev


def carousel_t5_12_sum(n: int) -> int:
    """The closed double sum (2n+1) * sum_{i<j<=n} i (j - i + 1).

    Asymptotic embedding count of the size-5 carousel into the size-(2n+1)
    carousel; its ratio 4! * sum / (2n+1)_5 converges to 1/16.  Finite-n
    exactness is not claimed (see the deviation fixture in the tests).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    inner = sum(i * (j - i + 1) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    return (2 * n + 1) * inner


def count_embeddings(pattern: Tournament, host: Tournament) -> int:
    """Brute-force count of arc-preserving injections (test oracle)."""
    from itertools import permutations as perms

    count = 0
    for img in perms(range(host.n), pattern.n):
        if all(
            host.beats(img[i], img[j]) == pattern.beats(i, j)
            for i in range(pattern.n)
            for j in range(i + 1, pattern.n)
        ):
            count += 1
    return count


def is_locally_transitive(t: Tournament) -> bool:
    """No W4 and no L4 subtournament: every in/out-neighbourhood transitive."""
    if t.n < 4:
        return True
    w4 = canonical_form(catalog_lookup("W4"))
    l4 = canonical_form(catalog_lookup("L4"))
    classes = enumerate_tournaments(4)
    bad = {next(i for i, x in enumerate(classes) if x == w4),
           next(i for i, x in enumerate(classes) if x == l4)}
    counts = subset_class_counts(t, 4)
    return all(counts[i] == 0 for i in bad)
