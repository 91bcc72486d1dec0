"""Types, flags, flag enumeration, densities, products and the downward map.

A flag is a tournament together with an embedding of a type: a small
tournament on labelled vertices 1..k.  Flag isomorphism preserves labels,
so the canonical form of a flag pins the labelled vertices at positions
0..k-1 and minimizes the encoding over relabelings of the rest.

Four nonempty types are shipped, matching the certificate blocks:
"1" (one vertex), "A" (1 beats 2), "Tr3s" (transitive triple, 1 the
winner and 3 the loser) and "C3s" (3-cycle with 1 beating 2).  The empty
type "0" makes plain tournaments a special case of flags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .errors import CapabilityError
from .tournaments import (
    Tournament,
    canonical_form,
    enumerate_tournaments,
    subtournament,
)
from .tournaments import _bits_to_mask, _min_encoding

FLAG_SIZE_MAX = 6


@dataclass(frozen=True)
class TypeSigma:
    name: str
    tournament: Tournament

    @property
    def size(self) -> int:
        return self.tournament.n


TYPE_0 = TypeSigma("0", Tournament(0, 0))
TYPE_1 = TypeSigma("1", Tournament(1, 0))
TYPE_A = TypeSigma("A", Tournament.from_arcs(2, [(0, 1)]))
TYPE_TR3S = TypeSigma("Tr3s", Tournament.from_arcs(3, [(0, 1), (0, 2), (1, 2)]))
TYPE_C3S = TypeSigma("C3s", Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)]))

TYPES: dict[str, TypeSigma] = {
    t.name: t for t in (TYPE_0, TYPE_1, TYPE_A, TYPE_TR3S, TYPE_C3S)
}


@dataclass(frozen=True)
class Flag:
    """A sigma-flag: `labels[i]` is the base vertex carrying type label i+1."""

    sigma: TypeSigma
    base: Tournament
    labels: tuple[int, ...]

    def __post_init__(self):
        k = self.sigma.size
        if len(self.labels) != k or len(set(self.labels)) != k:
            raise ValueError("labeling must be injective over the type")
        for v in self.labels:
            if not 0 <= v < self.base.n:
                raise ValueError(f"label vertex {v} out of range")
        st = self.sigma.tournament
        for i in range(k):
            for j in range(i + 1, k):
                if st.beats(i, j) != self.base.beats(self.labels[i], self.labels[j]):
                    raise ValueError("labeling is not an embedding of the type")

    @property
    def size(self) -> int:
        return self.base.n

    def unlabeled(self) -> tuple[int, ...]:
        marked = set(self.labels)
        return tuple(v for v in range(self.base.n) if v not in marked)

    def underlying(self) -> Tournament:
        return self.base

    def key(self) -> str:
        """Serialization key: type|encoding|label map "1:v1,2:v2,..."."""
        lab = ",".join(f"{i + 1}:{v}" for i, v in enumerate(self.labels))
        return f"{self.sigma.name}|{self.base.encode()}|{lab}"

    @staticmethod
    def from_key(text: str) -> "Flag":
        type_name, enc, lab = text.split("|")
        base = Tournament.decode(enc)
        pairs = [item.split(":") for item in lab.split(",")] if lab else []
        labels = [0] * len(pairs)
        for pos, vert in pairs:
            labels[int(pos) - 1] = int(vert)
        return Flag(TYPES[type_name], base, tuple(labels))

    def __str__(self):
        return self.key()


def unit_flag(sigma: TypeSigma) -> Flag:
    """1_sigma: the type itself, identity labeling."""
    return Flag(sigma, sigma.tournament, tuple(range(sigma.size)))


@lru_cache(maxsize=262144)
def _canonical_flag_cached(type_name: str, n: int, mask: int, labels: tuple[int, ...]) -> Flag:
    t = Tournament(n, mask)
    bits = _min_encoding(n, t.out_rows(), pinned=labels)
    return Flag(
        TYPES[type_name],
        Tournament(n, _bits_to_mask(bits)),
        tuple(range(len(labels))),
    )


def canonical_flag(f: Flag) -> Flag:
    """Label-preserving canonical form: labels at 0..k-1, rest minimized."""
    return _canonical_flag_cached(f.sigma.name, f.base.n, f.base.mask, f.labels)


def flags_isomorphic(f1: Flag, f2: Flag) -> bool:
    if f1.sigma.name != f2.sigma.name or f1.size != f2.size:
        return False
    return canonical_flag(f1) == canonical_flag(f2)


def induced_flag(f: Flag, extra: tuple[int, ...]) -> Flag:
    """Subflag induced by labels + `extra` unlabeled vertices, canonicalized."""
    verts = sorted(set(f.labels) | set(extra))
    pos = {v: i for i, v in enumerate(verts)}
    sub = subtournament(f.base, verts)
    moved = Flag(f.sigma, sub, tuple(pos[v] for v in f.labels))
    return canonical_flag(moved)


# --- enumeration -------------------------------------------------------------


def _type_embeddings(sigma: TypeSigma, t: Tournament) -> list[tuple[int, ...]]:
    """All injective theta: [k] -> V(t) that embed the type."""
    k = sigma.size
    st = sigma.tournament
    out = []
    for img in permutations(range(t.n), k):
        if all(
            st.beats(i, j) == t.beats(img[i], img[j])
            for i in range(k)
            for j in range(i + 1, k)
        ):
            out.append(img)
    return out


@lru_cache(maxsize=None)
def _enumerate_flags_raw(type_name: str, n: int) -> tuple[Flag, ...]:
    sigma = TYPES[type_name]
    if not sigma.size <= n <= FLAG_SIZE_MAX:
        raise CapabilityError(
            f"enumerate_flags supports sizes {sigma.size}..{FLAG_SIZE_MAX}, got {n}"
        )
    found: set[Flag] = set()
    for t in enumerate_tournaments(n):
        for theta in _type_embeddings(sigma, t):
            found.add(canonical_flag(Flag(sigma, t, theta)))
    return tuple(sorted(found, key=lambda f: (f.base.encode(), f.labels)))


@lru_cache(maxsize=None)
def enumerate_flags(type_name: str, n: int) -> tuple[Flag, ...]:
    """All sigma-flags of size n up to label-preserving isomorphism.

    Deterministic: canonical-encoding order, except that the four bases
    used by the shipped certificates keep their reference header order
    (see _named_flag_orders).
    """
    ordered = _enumerate_flags_raw(type_name, n)
    header = _named_flag_orders().get((type_name, n))
    if header is not None:
        assert set(header.values()) == set(ordered)
        ordered = tuple(header.values())
    return tuple(ordered)


def basis_index(type_name: str, n: int) -> dict[Flag, int]:
    return {f: i for i, f in enumerate(enumerate_flags(type_name, n))}


# --- named flags --------------------------------------------------------------


def _classify_unlabeled(f: Flag) -> tuple[str, int, tuple[int, ...]]:
    """(underlying catalog-ish class, outdeg of unlabeled vertex,
    sorted type labels beaten by it) for the size-4 one-extra-vertex flags."""
    (u,) = f.unlabeled()
    beats_labels = tuple(
        sorted(i + 1 for i, v in enumerate(f.labels) if f.base.beats(u, v))
    )
    outdeg = f.base.out_degrees()[u]
    return ("", outdeg, beats_labels)


@lru_cache(maxsize=1)
def _named_flags() -> dict[str, Flag]:
    """Registry of the conventional flag names (ASCII: Tr3*/C3* as Tr3s/C3s)."""
    named: dict[str, Flag] = {}

    def add(name: str, sigma: TypeSigma, arcs, labels):
        n = 1 + max(max(a) for a in arcs) if arcs else 1
        base = Tournament.from_arcs(n, arcs)
        named[name] = canonical_flag(Flag(sigma, base, labels))

    # size-2 type-1 flags
    add("alpha", TYPE_1, [(0, 1)], (0,))
    add("beta", TYPE_1, [(1, 0)], (0,))
    # F^1_3: label role within Tr_3 (winner/middle/loser), plus the 3-cycle
    add("Tr3^{1,L}", TYPE_1, [(1, 0), (2, 0), (1, 2)], (0,))
    add("C3^1", TYPE_1, [(0, 1), (1, 2), (2, 0)], (0,))
    add("Tr3^{1,M}", TYPE_1, [(0, 1), (2, 0), (2, 1)], (0,))
    add("Tr3^{1,W}", TYPE_1, [(0, 1), (0, 2), (1, 2)], (0,))
    # F^A_3: third vertex beats both labels (I), is beaten by both (O),
    # closes the 3-cycle, or sits between the labels (Tr3^A)
    add("I^A", TYPE_A, [(0, 1), (2, 0), (2, 1)], (0, 1))
    add("C3^A", TYPE_A, [(0, 1), (1, 2), (2, 0)], (0, 1))
    add("Tr3^A", TYPE_A, [(0, 1), (0, 2), (2, 1)], (0, 1))
    add("O^A", TYPE_A, [(0, 1), (0, 2), (1, 2)], (0, 1))

    # size-4 flags over Tr3*: keyed by the underlying tournament and the
    # out-degree of the unlabelled vertex; W4/L4 cases are unique outright
    tr4 = canonical_form(Tournament(4, (1 << 6) - 1))
    r4 = canonical_form(Tournament.from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]))
    w4 = canonical_form(Tournament.from_arcs(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]))
    l4 = canonical_form(Tournament.from_arcs(4, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)]))
    for f in _enumerate_flags_raw("Tr3s", 4):
        under = canonical_form(f.base)
        _, outdeg, _ = _classify_unlabeled(f)
        if under == w4:
            named["W4^{Tr3s}"] = f
        elif under == l4:
            named["L4^{Tr3s}"] = f
        elif under == tr4:
            named[f"Tr4^{{Tr3s,{outdeg}}}"] = f
        else:
            assert under == r4
            named[f"R4^{{Tr3s,{outdeg}}}"] = f

    # size-4 flags over C3*: keyed by the set of labels the unlabelled
    # vertex beats; the empty and full sets are L4 and W4
    for f in _enumerate_flags_raw("C3s", 4):
        _, _, beats = _classify_unlabeled(f)
        if beats == ():
            named["L4^{C3s}"] = f
        elif beats == (1, 2, 3):
            named["W4^{C3s}"] = f
        else:
            named[f"R4^{{C3s,{''.join(map(str, beats))}}}"] = f
    return named


@lru_cache(maxsize=1)
def _named_flag_orders() -> dict[tuple[str, int], dict[str, Flag]]:
    """Certificate-basis header orders for the four reference bases."""
    orders = {
        ("1", 3): ["Tr3^{1,L}", "C3^1", "Tr3^{1,M}", "Tr3^{1,W}"],
        ("A", 3): ["I^A", "C3^A", "Tr3^A", "O^A"],
        ("Tr3s", 4): [
            "Tr4^{Tr3s,3}", "W4^{Tr3s}", "Tr4^{Tr3s,2}", "R4^{Tr3s,1}",
            "L4^{Tr3s}", "Tr4^{Tr3s,1}", "R4^{Tr3s,2}", "Tr4^{Tr3s,0}",
        ],
        ("C3s", 4): [
            "R4^{C3s,3}", "L4^{C3s}", "R4^{C3s,2}", "R4^{C3s,1}",
            "R4^{C3s,23}", "W4^{C3s}", "R4^{C3s,12}", "R4^{C3s,13}",
        ],
    }
    named = _named_flags_raw()
    return {
        key: {name: named[name] for name in names}
        for key, names in orders.items()
    }


def _named_flags_raw() -> dict[str, Flag]:
    return _named_flags()


def named_flag(name: str) -> Flag:
    table = _named_flags()
    if name not in table:
        raise KeyError(f"unknown flag name: {name!r}")
    return table[name]


@lru_cache(maxsize=1)
def _flag_names() -> dict[Flag, str]:
    return {f: name for name, f in _named_flags().items()}


def flag_name(f: Flag) -> str | None:
    return _flag_names().get(canonical_flag(f))


# --- densities ----------------------------------------------------------------


def density(pattern: Tournament, host: Tournament) -> Fraction:
    """p(pattern; host): probability a uniform |pattern|-subset of the host
    induces a copy of the pattern."""
    k, n = pattern.n, host.n
    if k > n:
        raise ValueError(f"pattern larger than host ({k} > {n})")
    if k == 0:
        return Fraction(1)
    total = math.comb(n, k)
    if k <= 5:
        from .counting import subset_class_counts

        classes = enumerate_tournaments(k)
        target = canonical_form(pattern)
        idx = next(i for i, t in enumerate(classes) if t == target)
        return Fraction(subset_class_counts(host, k)[idx], total)
    if total > 10**7:
        raise CapabilityError(f"density scan over {total} subsets is out of budget")
    target = canonical_form(pattern)
    hits = sum(
        1
        for subset in combinations(range(n), k)
        if canonical_form(subtournament(host, subset)) == target
    )
    return Fraction(hits, total)


def t_ind(pattern: Tournament, host: Tournament) -> Fraction:
    """Labelled density: probability a uniform injection is an embedding."""
    from .tournaments import aut_count

    p = density(pattern, host)
    return Fraction(aut_count(pattern), math.factorial(pattern.n)) * p


def flag_density(f: Flag, g: Flag) -> Fraction:
    """p(F; G) for sigma-flags: a uniform (|F|-k)-subset of G's unlabelled
    vertices, together with the labels, induces a flag isomorphic to F."""
    if f.sigma.name != g.sigma.name:
        raise ValueError("flag density requires matching types")
    if f.size > g.size:
        raise ValueError(f"flag larger than host ({f.size} > {g.size})")
    fc = canonical_flag(f)
    free = g.unlabeled()
    take = f.size - f.sigma.size
    hits = sum(1 for ws in combinations(free, take) if induced_flag(g, ws) == fc)
    return Fraction(hits, math.comb(len(free), take))


def joint_density(parts: tuple[Flag, ...] | list[Flag], g: Flag) -> Fraction:
    """p(F_1, ..., F_t; G): disjoint uniform unlabelled subsets W_i of the
    required sizes simultaneously induce the given flags."""
    k = g.sigma.size
    for f in parts:
        if f.sigma.name != g.sigma.name:
            raise ValueError("joint density requires matching types")
    sizes = [f.size - k for f in parts]
    if sum(sizes) + k > g.size:
        raise ValueError("joint density size constraint violated")
    targets = [canonical_flag(f) for f in parts]
    free = list(g.unlabeled())

    total = 1
    remaining = len(free)
    for s in sizes:
        total *= math.comb(remaining, s)
        remaining -= s

    def rec(idx: int, pool: tuple[int, ...]) -> int:
        if idx == len(parts):
            return 1
        count = 0
        for ws in combinations(pool, sizes[idx]):
            if induced_flag(g, ws) == targets[idx]:
                rest = tuple(v for v in pool if v not in set(ws))
                count += rec(idx + 1, rest)
        return count

    return Fraction(rec(0, tuple(free)), total)


def flag_product(f1: Flag, f2: Flag, ell: int) -> dict[Flag, Fraction]:
    """F1 * F2 expanded over the size-ell basis: coefficients p(F1, F2; F)."""
    if f1.sigma.name != f2.sigma.name:
        raise ValueError("flag product requires matching types")
    k = f1.sigma.size
    if ell < f1.size + f2.size - k:
        raise ValueError("product level ell too small")
    out: dict[Flag, Fraction] = {}
    for g in enumerate_flags(f1.sigma.name, ell):
        coeff = joint_density((f1, f2), g)
        if coeff:
            out[g] = coeff
    return out


# --- downward operator -----------------------------------------------------------


def q_sigma(f: Flag) -> Fraction:
    """Normalizing factor: probability a uniform injection [k] -> V(F|0)
    reproduces F as a flag."""
    k = f.sigma.size
    n = f.size
    fc = canonical_flag(f)
    good = 0
    for theta in _type_embeddings(f.sigma, f.base):
        if canonical_flag(Flag(f.sigma, f.base, theta)) == fc:
            good += 1
    return Fraction(good, math.perm(n, k))


def downward_flag(f: Flag) -> tuple[Fraction, Tournament]:
    """[[F]]_sigma = q_sigma(F) * (underlying tournament, canonicalized)."""
    return q_sigma(f), canonical_form(f.base)


def downward(comb: dict[Flag, Fraction]) -> dict[Tournament, Fraction]:
    """Linear extension of the downward operator to combinations."""
    out: dict[Tournament, Fraction] = {}
    for f, coeff in comb.items():
        q, under = downward_flag(f)
        value = out.get(under, Fraction(0)) + coeff * q
        if value:
            out[under] = value
        else:
            out.pop(under, None)
    return out


def comb_to_json(comb: dict) -> dict[str, str]:
    """Linear combination -> JSON map (flag key or tournament encoding -> "p/q")."""
    from .arith import format_rational

    out = {}
    for key, coeff in comb.items():
        name = key.key() if isinstance(key, Flag) else key.encode()
        out[name] = format_rational(coeff)
    return out
