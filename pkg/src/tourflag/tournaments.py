"""Tournament representation, canonical labeling, enumeration and generators.

A tournament on n vertices is stored as the integer bitmask of its
n(n-1)/2 pair orientations: pairs (i, j) with i < j are indexed in
row-major order, and bit t is 1 exactly when i beats j.  The text
encoding is "n:b1b2..." in the same order, e.g. the 3-cycle
0->1, 1->2, 2->0 is "3:101" and the transitive triangle is "3:111".

Canonical form is the lexicographically minimal bit sequence over all
relabelings, computed by an ordered-partition refinement search (the
out-degree pre-pass falls out of the first refinement level), which is
exact and comfortably fast for n <= 9.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from random import Random
from typing import Iterable, Sequence

from .errors import CapabilityError

# Canonicalization and enumeration have hard small-n caps below; the type
# itself only guards against absurd sizes so that large generated hosts
# (carousels, blow-ups, random tournaments) can flow into density scans.
MAX_VERTICES = 1024
CANONICAL_MAX = 9
ENUMERATE_MAX = 8


def pair_index(i: int, j: int, n: int) -> int:
    """Row-major index of pair (i, j), i < j, among all n(n-1)/2 pairs."""
    if not 0 <= i < j < n:
        raise IndexError(f"bad vertex pair ({i}, {j}) for n={n}")
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class Tournament:
    """Immutable tournament; `mask` bit pair_index(i,j,n) set iff i beats j."""

    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count out of range: {self.n}")
        if self.mask >> (self.n * (self.n - 1) // 2):
            raise ValueError("orientation mask has bits beyond the pair count")

    # -- construction ----------------------------------------------------

    @staticmethod
    def from_arcs(n: int, arcs: Iterable[tuple[int, int]]) -> "Tournament":
        """Build from a complete arc list; every pair must appear exactly once."""
        seen = set()
        mask = 0
        for u, v in arcs:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad arc ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate pair {key}")
            seen.add(key)
            if u < v:
                mask |= 1 << pair_index(u, v, n)
        if len(seen) != n * (n - 1) // 2:
            raise ValueError("arc list does not cover every vertex pair")
        return Tournament(n, mask)

    @staticmethod
    def decode(text: str) -> "Tournament":
        """Parse the "n:bits" text encoding."""
        head, sep, bits = text.partition(":")
        if not sep:
            raise ValueError(f"missing ':' in tournament encoding {text!r}")
        n = int(head)
        if len(bits) != n * (n - 1) // 2 or set(bits) - {"0", "1"}:
            raise ValueError(f"bad bit string in tournament encoding {text!r}")
        mask = 0
        for t, ch in enumerate(bits):
            if ch == "1":
                mask |= 1 << t
        return Tournament(n, mask)

    def encode(self) -> str:
        npairs = self.n * (self.n - 1) // 2
        bits = "".join("1" if (self.mask >> t) & 1 else "0" for t in range(npairs))
        return f"{self.n}:{bits}"

    # -- basic queries ----------------------------------------------------

    def beats(self, u: int, v: int) -> bool:
        if u == v:
            raise ValueError("no self-arcs in a tournament")
        if u < v:
            return bool((self.mask >> pair_index(u, v, self.n)) & 1)
        return not ((self.mask >> pair_index(v, u, self.n)) & 1)

    def out_rows(self) -> tuple[int, ...]:
        """Per-vertex bitmask of out-neighbours."""
        rows = [0] * self.n
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if (self.mask >> pair_index(i, j, self.n)) & 1:
                    rows[i] |= 1 << j
                else:
                    rows[j] |= 1 << i
        return tuple(rows)

    def out_degrees(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.out_rows())

    def permute(self, pi: Sequence[int]) -> "Tournament":
        """Relabel: vertex v moves to position pi[v]."""
        if sorted(pi) != list(range(self.n)):
            raise ValueError("not a permutation")
        arcs = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.beats(i, j):
                    arcs.append((pi[i], pi[j]))
                else:
                    arcs.append((pi[j], pi[i]))
        return Tournament.from_arcs(self.n, arcs)

    def __str__(self):
        return self.encode()


def subtournament(t: Tournament, subset: Sequence[int]) -> Tournament:
    """Induced orientation on `subset`, vertices renumbered order-preservingly."""
    verts = sorted(subset)
    if len(set(verts)) != len(verts):
        raise ValueError("repeated vertex in subset")
    if verts and not (0 <= verts[0] and verts[-1] < t.n):
        raise IndexError(f"vertex out of range for size-{t.n} tournament")
    arcs = []
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            if t.beats(verts[a], verts[b]):
                arcs.append((a, b))
            else:
                arcs.append((b, a))
    return Tournament.from_arcs(len(verts), arcs)


# --- canonical form ---------------------------------------------------------


def _min_encoding(n: int, rows: Sequence[int], pinned: Sequence[int] = ()) -> list[int]:
    """Lexicographically minimal row-major bit list over all relabelings.

    `pinned` vertices are forced into the leading positions in the given
    order (used for flag canonical forms); all other vertices may move.
    The search keeps an ordered partition of the unplaced free vertices:
    each placed vertex's row is minimal when, inside every block, the
    vertices it loses to precede the ones it beats, and that split is
    exactly the refinement carried to the next level.
    """
    k = len(pinned)
    best: list[int] | None = None

    def split(partition, u):
        rowbits: list[int] = []
        newpart: list[list[int]] = []
        for block in partition:
            members = [w for w in block if w != u]
            if not members:
                continue
            ins = [w for w in members if not (rows[u] >> w) & 1]
            outs = [w for w in members if (rows[u] >> w) & 1]
            rowbits.extend([0] * len(ins) + [1] * len(outs))
            if ins:
                newpart.append(ins)
            if outs:
                newpart.append(outs)
        return rowbits, newpart

    def search(partition: list[list[int]], prefix: list[int], depth: int):
        nonlocal best
        if depth == n:
            if best is None or prefix < best:
                best = prefix
            return
        if depth < k:
            u = pinned[depth]
            fixed = [1 if (rows[u] >> w) & 1 else 0 for w in pinned[depth + 1 :]]
            rowbits, newpart = split(partition, u)
            newprefix = prefix + fixed + rowbits
            if best is not None and newprefix > best[: len(newprefix)]:
                return
            search(newpart, newprefix, depth + 1)
            return
        options = [split(partition, u) for u in partition[0]]
        options.sort(key=lambda opt: opt[0])
        for rowbits, newpart in options:
            newprefix = prefix + rowbits
            if best is not None and newprefix > best[: len(newprefix)]:
                continue
            search(newpart, newprefix, depth + 1)

    pinned_set = set(pinned)
    free = [v for v in range(n) if v not in pinned_set]
    search([free] if free else [], [], 0)
    assert best is not None or n == 0
    return best or []


def _bits_to_mask(bits: Sequence[int]) -> int:
    mask = 0
    for t, b in enumerate(bits):
        if b:
            mask |= 1 << t
    return mask


@lru_cache(maxsize=262144)
def _canonical_cached(n: int, mask: int) -> int:
    rows = Tournament(n, mask).out_rows()
    return _bits_to_mask(_min_encoding(n, rows))


def canonical_form(t: Tournament) -> Tournament:
    """The lexicographically minimal relabeling of t (same isomorphism class)."""
    if t.n > CANONICAL_MAX:
        raise CapabilityError(
            f"canonical_form supports at most {CANONICAL_MAX} vertices, got {t.n}"
        )
    return Tournament(t.n, _canonical_cached(t.n, t.mask))


def are_isomorphic(t1: Tournament, t2: Tournament) -> bool:
    if t1.n != t2.n:
        return False
    return canonical_form(t1).mask == canonical_form(t2).mask


def find_isomorphism(t1: Tournament, t2: Tournament) -> tuple[int, ...] | None:
    """A permutation pi with t1.permute(pi) == t2, or None."""
    if t1.n != t2.n:
        return None
    n = t1.n
    rows1, rows2 = t1.out_rows(), t2.out_rows()
    deg1 = [r.bit_count() for r in rows1]
    deg2 = [r.bit_count() for r in rows2]
    img = [-1] * n
    used = [False] * n

    def rec(v: int) -> bool:
        if v == n:
            return True
        for w in range(n):
            if used[w] or deg1[v] != deg2[w]:
                continue
            if all(((rows1[u] >> v) & 1) == ((rows2[img[u]] >> w) & 1) for u in range(v)):
                img[v] = w
                used[w] = True
                if rec(v + 1):
                    return True
                used[w] = False
        return False

    return tuple(img) if rec(0) else None


def aut_count(t: Tournament) -> int:
    """|Aut(t)|: number of permutations fixing the tournament.

    Backtracking over degree-compatible images; independent of the
    canonical-form search, so the two can cross-check each other.
    """
    if t.n > CANONICAL_MAX:
        raise CapabilityError(
            f"aut_count supports at most {CANONICAL_MAX} vertices, got {t.n}"
        )
    n = t.n
    rows = t.out_rows()
    deg = [r.bit_count() for r in rows]
    img = [-1] * n
    used = [False] * n
    count = 0

    def rec(v: int):
        nonlocal count
        if v == n:
            count += 1
            return
        for w in range(n):
            if used[w] or deg[v] != deg[w]:
                continue
            if all(((rows[u] >> v) & 1) == ((rows[img[u]] >> w) & 1) for u in range(v)):
                img[v] = w
                used[w] = True
                rec(v + 1)
                used[w] = False

    rec(0)
    return count


# --- exhaustive enumeration ---------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_tournaments(n: int) -> tuple[Tournament, ...]:
    """All tournaments on n vertices up to isomorphism, canonically encoded,
    sorted by encoding."""
    if n > ENUMERATE_MAX:
        raise CapabilityError(
            f"enumerate supports at most {ENUMERATE_MAX} vertices, got {n}"
        )
    if n < 0:
        raise ValueError("negative vertex count")
    if n <= 1:
        return (Tournament(n, 0),)
    smaller = enumerate_tournaments(n - 1)
    seen: set[int] = set()
    for t in smaller:
        for pattern in range(1 << (n - 1)):
            # new vertex n-1; bit i of pattern set means i beats the new vertex
            mask = 0
            for i in range(n - 1):
                for j in range(i + 1, n - 1):
                    if t.beats(i, j):
                        mask |= 1 << pair_index(i, j, n)
            for i in range(n - 1):
                if (pattern >> i) & 1:
                    mask |= 1 << pair_index(i, n - 1, n)
            seen.add(_canonical_cached(n, mask))
    reps = [Tournament(n, mask) for mask in seen]
    reps.sort(key=lambda t: t.encode())
    return tuple(reps)


@lru_cache(maxsize=None)
def pattern_class_table(k: int) -> tuple[int, ...]:
    """For every k-vertex orientation mask, the index of its class in
    enumerate_tournaments(k).  Powers fast induced-subtournament scans."""
    if k > 5:
        raise CapabilityError("pattern_class_table supports at most 5 vertices")
    classes = {t.mask: idx for idx, t in enumerate(enumerate_tournaments(k))}
    npairs = k * (k - 1) // 2
    return tuple(classes[_canonical_cached(k, mask)] for mask in range(1 << npairs))


# --- generators -----------------------------------------------------------------


def generate_transitive(n: int) -> Tournament:
    """Tr_n: i beats j whenever i < j."""
    return Tournament(n, (1 << (n * (n - 1) // 2)) - 1)


def generate_carousel(m: int) -> Tournament:
    """Balanced locally transitive tournament on odd m: v beats v+1..v+(m-1)/2."""
    if m < 1 or m % 2 == 0:
        raise ValueError(f"carousel size must be odd, got {m}")
    half = (m - 1) // 2
    arcs = [(v, (v + i) % m) for v in range(m) for i in range(1, half + 1)]
    return Tournament.from_arcs(m, arcs)


def generate_triangular(n: int) -> Tournament:
    """Recursive three-block cyclic blow-up with near-equal consecutive blocks.

    Block sizes n0 >= n1 >= n2 with each in {floor(n/3), ceil(n/3)};
    block i beats block (i+1) mod 3 entirely; blocks recurse.
    """
    if n < 0:
        raise ValueError("negative vertex count")
    if n <= 1:
        return Tournament(n, 0)
    base, rem = divmod(n, 3)
    sizes = [base + (1 if i < rem else 0) for i in range(3)]
    starts = [0, sizes[0], sizes[0] + sizes[1]]
    blocks = [list(range(starts[i], starts[i] + sizes[i])) for i in range(3)]
    arcs = []
    for i in range(3):
        for u in blocks[i]:
            for w in blocks[(i + 1) % 3]:
                arcs.append((u, w))
    for i in range(3):
        inner = generate_triangular(sizes[i])
        for a in range(sizes[i]):
            for b in range(a + 1, sizes[i]):
                if inner.beats(a, b):
                    arcs.append((blocks[i][a], blocks[i][b]))
                else:
                    arcs.append((blocks[i][b], blocks[i][a]))
    return Tournament.from_arcs(n, arcs)


def generate_random(n: int, seed: int) -> Tournament:
    """Uniformly random orientation per pair, deterministic for a fixed seed.

    Contract: bits are drawn one per pair in row-major pair order from
    Python's Mersenne Twister seeded with `seed` (random.Random(seed),
    one getrandbits(1) call per pair), so fixtures are reproducible.
    """
    rng = Random(seed)
    mask = 0
    for t in range(n * (n - 1) // 2):
        if rng.getrandbits(1):
            mask |= 1 << t
    return Tournament(n, mask)


# --- structure queries ------------------------------------------------------------


def is_strongly_connected(t: Tournament) -> bool:
    if t.n <= 1:
        return True
    rows = t.out_rows()

    def closure(adj: Sequence[int]) -> int:
        reached = 1
        frontier = 1
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = adj[v] & ~reached
            reached |= new
            frontier |= new
        return reached

    full = (1 << t.n) - 1
    if closure(rows) != full:
        return False
    rev = [0] * t.n
    for v in range(t.n):
        for w in range(t.n):
            if v != w and (rows[v] >> w) & 1:
                rev[w] |= 1 << v
    return closure(rev) == full


def count_c3(t: Tournament) -> int:
    """Number of 3-cycles: C(n,3) minus transitive triples via out-degrees."""
    n = t.n
    total = n * (n - 1) * (n - 2) // 6
    return total - sum(d * (d - 1) // 2 for d in t.out_degrees())


# --- named catalog -----------------------------------------------------------------


def _catalog_path():
    return resources.files("tourflag").joinpath("data/catalog.json")


@lru_cache(maxsize=1)
def catalog() -> dict[str, Tournament]:
    """Named tournaments (canonical encodings), loaded from the data file."""
    with _catalog_path().open("r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return {name: Tournament.decode(enc) for name, enc in raw.items()}


@lru_cache(maxsize=1)
def _reverse_catalog() -> dict[tuple[int, int], str]:
    # T5^k entries are inserted last so they win over aliases like Tr_5
    table: dict[tuple[int, int], str] = {}
    entries = sorted(catalog().items(), key=lambda kv: (kv[0].startswith("T5^"), kv[0]))
    for name, t in entries:
        table[(t.n, t.mask)] = name
    return table


_NAME_ALIASES = {"Tr4": "Tr_4", "Tr5": "Tr_5", "R_4": "R4", "W_4": "W4", "L_4": "L4", "C_3": "C3"}


def catalog_lookup(name: str) -> Tournament:
    name = _NAME_ALIASES.get(name, name)
    if name.startswith("Tr") and name[2:3].isdigit():
        name = f"Tr_{name[2:]}"
    table = catalog()
    if name not in table:
        raise KeyError(f"unknown tournament name: {name!r}")
    return table[name]


def reverse_lookup(t: Tournament) -> str | None:
    c = canonical_form(t)
    return _reverse_catalog().get((c.n, c.mask))


def _catalog_constructions() -> dict[str, Tournament]:
    """Independent arc-level constructions of every named tournament.

    The strongly connected size-5 tournaments follow the circulant-style
    drawings (a 5-cycle 0->1->2->3->4->0 plus the listed chords); the
    reducible ones are dominating joins of smaller pieces.
    """

    def join(*parts: Tournament) -> Tournament:
        # every vertex of an earlier part beats every vertex of a later part
        sizes = [p.n for p in parts]
        offsets = [sum(sizes[:i]) for i in range(len(parts))]
        n = sum(sizes)
        arcs = []
        for pi, part in enumerate(parts):
            off = offsets[pi]
            for a in range(part.n):
                for b in range(a + 1, part.n):
                    if part.beats(a, b):
                        arcs.append((off + a, off + b))
                    else:
                        arcs.append((off + b, off + a))
            for qi in range(pi + 1, len(parts)):
                for a in range(part.n):
                    for b in range(parts[qi].n):
                        arcs.append((off + a, offsets[qi] + b))
        return Tournament.from_arcs(n, arcs)

    def cycle5_plus(chords: list[tuple[int, int]]) -> Tournament:
        arcs = [(v, (v + 1) % 5) for v in range(5)] + chords
        return Tournament.from_arcs(5, arcs)

    one = generate_transitive(1)
    c3 = generate_carousel(3)
    r4 = Tournament.from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)])
    w4 = Tournament.from_arcs(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)])
    l4 = Tournament.from_arcs(4, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)])

    named = {"C3": c3, "R4": r4, "W4": w4, "L4": l4}
    for k in range(1, 9):
        named[f"Tr_{k}"] = generate_transitive(k)

    named["T5^1"] = generate_transitive(5)
    named["T5^2"] = join(c3, generate_transitive(2))
    named["T5^3"] = join(r4, one)
    named["T5^4"] = join(one, c3, one)
    named["T5^5"] = join(generate_transitive(2), c3)
    named["T5^6"] = join(one, r4)
    named["T5^7"] = cycle5_plus([(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)])
    named["T5^8"] = cycle5_plus([(0, 2), (0, 3), (1, 3), (1, 4), (4, 2)])
    named["T5^9"] = cycle5_plus([(0, 2), (0, 3), (1, 3), (2, 4), (4, 1)])
    named["T5^10"] = cycle5_plus([(0, 3), (1, 3), (2, 4), (2, 0), (4, 1)])
    named["T5^11"] = cycle5_plus([(0, 2), (0, 3), (1, 4), (2, 4), (3, 1)])
    named["T5^12"] = generate_carousel(5)
    return {name: canonical_form(t) for name, t in named.items()}


def resolve_tournament(text: str) -> Tournament:
    """Accept "n:bits" encodings, catalog names, and the parametric forms
    carousel:m, triangular:n and random:n:seed."""
    if text.startswith("carousel:"):
        return generate_carousel(int(text.split(":", 1)[1]))
    if text.startswith("triangular:"):
        return generate_triangular(int(text.split(":", 1)[1]))
    if text.startswith("random:"):
        _, n, seed = text.split(":")
        return generate_random(int(n), int(seed))
    if ":" in text:
        return Tournament.decode(text)
    return catalog_lookup(text)
