"""Homogeneous sets, maximal c_min-homogeneous trees and the exact
homogeneity-number solver."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .colorings import PairColoring
from .errors import ResourceError, UsageError
from .seqspace import format_point, format_space, parse_point

BOTH = "both"
DEFAULT_SOLVER_CAP = 64
DEFAULT_TREE_CAP = 10**6
DEFAULT_NODE_BUDGET = 10**6


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def check_homogeneous(c: PairColoring, S: Iterable):
    """0 or 1 for a homogeneous set of that colour, ``"both"`` for sets of
    size <= 1, ``None`` when both colours occur."""
    pts = list(dict.fromkeys(S))
    for p in pts:
        if p not in c.index:
            raise UsageError(f"{p!r} is not in the carrier of {c!r}")
    if len(pts) <= 1:
        return BOTH
    idx = [c.index[p] for p in pts]
    mask = sum(1 << i for i in idx)
    seen = set()
    for i in idx:
        others = mask & ~(1 << i)
        if c.rows[i] & others:
            seen.add(1)
        if others & ~c.rows[i]:
            seen.add(0)
        if len(seen) == 2:
            return None
    return seen.pop()


# -- maximal cliques (Bron-Kerbosch with pivoting) -------------------------


def maximal_cliques(rows: Sequence[int]) -> list[int]:
    """All maximal cliques of the graph given by adjacency masks, as masks."""
    out: list[int] = []

    def bk(R, P, X):
        if not P and not X:
            out.append(R)
            return
        PX = P | X
        pivot = max(_bits(PX), key=lambda u: (rows[u] & P).bit_count())
        for v in _bits(P & ~rows[pivot]):
            bk(R | (1 << v), P & rows[v], X & rows[v])
            P &= ~(1 << v)
            X |= 1 << v

    n = len(rows)
    if n:
        bk(0, (1 << n) - 1, 0)
    return out


def maximal_homogeneous_sets(c: PairColoring) -> list[tuple[int, int]]:
    """``(colour, mask)`` for every maximal homogeneous set of size >= 2
    (plus singletons that are maximal in one of the two graphs)."""
    n = c.n
    full = (1 << n) - 1
    comp = [full & ~r & ~(1 << i) for i, r in enumerate(c.rows)]
    found = [(1, m) for m in maximal_cliques(c.rows)]
    found += [(0, m) for m in maximal_cliques(comp)]
    return found


# -- exact set cover --------------------------------------------------------


def _member_key(mask):
    return (-mask.bit_count(), tuple(_bits(mask)))


def min_set_cover(universe: int, sets: Sequence[int]) -> list[int]:
    """Indices of a minimum-size subfamily of ``sets`` covering ``universe``.

    Branch and bound: branch on the uncovered element with fewest
    candidate sets, candidates ordered by size then membership; greedy
    incumbent; bound = chosen + ceil(remaining / best single coverage).
    """
    order = sorted(range(len(sets)), key=lambda i: _member_key(sets[i]))
    # drop duplicates and sets contained in an earlier (larger) one
    kept: list[int] = []
    for i in order:
        s = sets[i] & universe
        if s and not any((s | sets[j]) == sets[j] for j in kept):
            kept.append(i)
    if universe and (universe & ~_union(sets[i] for i in kept)):
        raise UsageError("sets do not cover the universe")

    by_elem: dict[int, list[int]] = {e: [] for e in _bits(universe)}
    for i in kept:
        for e in _bits(sets[i] & universe):
            by_elem[e].append(i)

    best = _greedy_cover(universe, sets, kept)

    def bound(rem):
        top = max((sets[i] & rem).bit_count() for i in kept)
        return -(-rem.bit_count() // top)

    def search(covered, chosen):
        nonlocal best
        rem = universe & ~covered
        if not rem:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + bound(rem) >= len(best):
            return
        e = min(_bits(rem), key=lambda x: (len(by_elem[x]), x))
        for i in by_elem[e]:
            chosen.append(i)
            search(covered | sets[i], chosen)
            chosen.pop()

    search(0, [])
    return sorted(best, key=lambda i: order.index(i))


def _union(masks):
    u = 0
    for m in masks:
        u |= m
    return u


def _greedy_cover(universe, sets, candidates):
    covered, chosen = 0, []
    while universe & ~covered:
        i = max(candidates, key=lambda j: ((sets[j] & universe & ~covered).bit_count(), -candidates.index(j)))
        chosen.append(i)
        covered |= sets[i]
    return chosen


# -- certificates -----------------------------------------------------------


@dataclass
class HomSet:
    points: tuple
    color: int
    verified: bool = False

    def verify(self, c: PairColoring) -> bool:
        h = check_homogeneous(c, self.points)
        self.verified = h == BOTH or h == self.color
        return self.verified


@dataclass
class CoverCertificate:
    coloring: PairColoring
    sets: list = field(default_factory=list)
    verified: bool = False

    @property
    def k(self) -> int:
        return len(self.sets)

    def verify(self) -> bool:
        covered = set()
        ok = True
        for h in self.sets:
            ok &= all(p in self.coloring.index for p in h.points) and h.verify(self.coloring)
            covered.update(h.points)
        self.verified = bool(ok) and covered == set(self.coloring.carrier)
        return self.verified

    def to_json(self, coloring_spec: str | None = None) -> dict:
        space = self.coloring.space
        fmt = (lambda p: format_point(p, space)) if space else (lambda p: list(p))
        doc = {"kind": "hm", "coloring": coloring_spec or self.coloring.name, "k": self.k,
               "sets": [{"color": h.color, "points": [fmt(p) for p in h.points]} for h in self.sets]}
        if space is not None:
            doc["space"] = format_space(space)
        return doc

    @classmethod
    def from_json(cls, doc: dict, coloring: PairColoring) -> "CoverCertificate":
        space = coloring.space

        def parse(p):
            return parse_point(p, space) if isinstance(p, str) else tuple(p)

        sets = [HomSet(tuple(parse(p) for p in s["points"]), int(s["color"])) for s in doc["sets"]]
        if int(doc.get("k", len(sets))) != len(sets):
            raise UsageError("certificate 'k' disagrees with its number of sets")
        return cls(coloring, sets)


def dumps_certificate(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- hm ---------------------------------------------------------------------


def hm_exact(c: PairColoring, cap: int = DEFAULT_SOLVER_CAP) -> tuple[int, CoverCertificate]:
    """Least number of homogeneous sets covering the carrier, with a
    verified certificate."""
    if c.n > cap:
        raise ResourceError(f"{c.n} points exceed the solver cap {cap}")
    if c.n == 0:
        return 0, CoverCertificate(c, [], True)
    cands = maximal_homogeneous_sets(c)
    chosen = min_set_cover((1 << c.n) - 1, [m for _, m in cands])
    sets = [HomSet(tuple(c.carrier[i] for i in _bits(cands[j][1])), cands[j][0]) for j in chosen]
    cert = CoverCertificate(c, sets)
    if not cert.verify():
        raise AssertionError("hm solver produced an invalid certificate")
    return cert.k, cert


def max_homogeneous_size(c: PairColoring) -> int:
    if c.n == 0:
        return 0
    return max(m.bit_count() for _, m in maximal_homogeneous_sets(c))


def hom_cover_lower_bound(c: PairColoring) -> int:
    if c.n == 0:
        return 0
    return -(-c.n // max_homogeneous_size(c))


# -- maximal c_min-homogeneous trees ---------------------------------------


@dataclass(frozen=True)
class MaxHomTree:
    """Binary tree of depth ``depth`` splitting exactly on even levels
    (colour 0) or exactly on odd levels (colour 1).  ``choices`` maps each
    node on a non-splitting level to its single successor digit."""

    depth: int
    color: int
    choices: tuple  # sorted ((prefix, digit), ...)

    def __post_init__(self):
        if self.color not in (0, 1):
            raise UsageError("tree colour must be 0 or 1")

    def splits_at(self, level: int) -> bool:
        return level % 2 == self.color

    @property
    def choice_map(self) -> dict:
        return dict(self.choices)

    def branches(self) -> list[tuple]:
        ch = self.choice_map
        level = [()]
        for L in range(self.depth):
            if self.splits_at(L):
                level = [t + (b,) for t in level for b in (0, 1)]
            else:
                level = [t + (ch[t],) for t in level]
        return level

    def contains(self, z: Sequence[int]) -> bool:
        ch = self.choice_map
        z = tuple(z)
        return len(z) == self.depth and all(
            self.splits_at(L) or ch[z[:L]] == z[L] for L in range(self.depth))


def maximal_hom_trees(depth: int, color: int, cap: int = DEFAULT_TREE_CAP) -> Iterator[MaxHomTree]:
    """Every maximal homogeneous tree of the given colour, lexicographic in
    the choice digits (nodes ordered by level, then lexicographically)."""
    if depth % 2 or depth < 2:
        raise UsageError(f"total depth must be even and >= 2, got {depth}")
    if color not in (0, 1):
        raise UsageError("colour must be 0 or 1")
    n_choice = sum(1 << ((L + 1) // 2 if color == 0 else L // 2)
                   for L in range(depth) if L % 2 != color)
    if (1 << n_choice) > cap:
        raise ResourceError(f"{1 << n_choice} trees exceed the cap {cap}")

    def rec(L, nodes, choices):
        if L == depth:
            yield MaxHomTree(depth, color, tuple(sorted(choices)))
            return
        if L % 2 == color:
            yield from rec(L + 1, [t + (b,) for t in nodes for b in (0, 1)], choices)
            return
        for digits in itertools.product((0, 1), repeat=len(nodes)):
            yield from rec(L + 1, [t + (b,) for t, b in zip(nodes, digits)],
                           choices + list(zip(nodes, digits)))

    yield from rec(0, [()], [])


# -- greedy c_min embedding -------------------------------------------------


def find_cmin_embedding(c: PairColoring, k: int, budget: int = DEFAULT_NODE_BUDGET) -> dict | None:
    """Colour-preserving injection of binary depth-``k`` points (coloured by
    parity of Delta) into the carrier of ``c``, or ``None``.

    Refines a set ``U_t`` per binary node ``t``: at level ``n`` it picks two
    carrier points whose colour is ``n mod 2`` and shrinks ``U_t`` to two
    disjoint cylinder balls around them with all cross pairs of that colour.
    Backtracks over pairs in lexicographic order, largest balls first.
    """
    if k < 0:
        raise UsageError("k must be >= 0")
    n = c.n
    if n < (1 << k):
        return None
    carrier = c.carrier
    depth = min(len(p) for p in carrier) if n else 0
    prefix_mask: dict[tuple, int] = {}
    for i, p in enumerate(carrier):
        for m in range(depth + 1):
            prefix_mask[p[:m]] = prefix_mask.get(p[:m], 0) | (1 << i)

    nodes = [t for lvl in range(k) for t in itertools.product((0, 1), repeat=lvl)]
    U: dict[tuple, int] = {(): (1 << n) - 1}
    visits = 0

    def cross_ok(B1, B2, col):
        for i in _bits(B1):
            hit = c.rows[i] & B2
            if (col and hit != B2) or (not col and hit):
                return False
        return True

    def options(t):
        lvl = len(t)
        col = lvl & 1
        need = 1 << (k - lvl - 1)
        Ut = U[t]
        tried = set()
        for i, j in itertools.combinations(list(_bits(Ut)), 2):
            if c.color_idx(i, j) != col:
                continue
            x1, x2 = carrier[i], carrier[j]
            d = next((l for l in range(depth) if x1[l] != x2[l]), depth)
            for total in range(2 * (d + 1), 2 * depth + 1):
                for m1 in range(d + 1, depth + 1):
                    m2 = total - m1
                    if not d + 1 <= m2 <= depth:
                        continue
                    B1 = Ut & prefix_mask[x1[:m1]]
                    B2 = Ut & prefix_mask[x2[:m2]]
                    if B1.bit_count() < need or B2.bit_count() < need or (B1, B2) in tried:
                        continue
                    tried.add((B1, B2))
                    if cross_ok(B1, B2, col):
                        yield B1, B2

    def step(pos):
        nonlocal visits
        if pos == len(nodes):
            return True
        visits += 1
        if visits > budget:
            return False
        t = nodes[pos]
        for B1, B2 in options(t):
            U[t + (0,)], U[t + (1,)] = B1, B2
            if step(pos + 1):
                return True
            if visits > budget:
                return False
        return False

    if not step(0):
        return None
    out = {}
    for x in itertools.product((0, 1), repeat=k):
        i = next(_bits(U[x]))
        out[x] = carrier[i]
    return out


def verify_cmin_embedding(c: PairColoring, emb: dict) -> bool:
    xs = list(emb)
    if len(set(emb.values())) != len(xs):
        return False
    for x, y in itertools.combinations(xs, 2):
        d = next(l for l in range(len(x)) if x[l] != y[l])
        if c.color(emb[x], emb[y]) != d & 1:
            return False
    return True

