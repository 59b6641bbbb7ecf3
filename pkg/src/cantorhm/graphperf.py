"""Exact clique and chromatic numbers, the lexicographic parity poset, and
perfection checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .colorings import PairColoring
from .errors import ContractError, InternalError, ResourceError, UsageError
from .rado import FiniteGraph, find_induced_embedding, rado_graph
from .seqspace import delta

MAX_EXACT_VERTICES = 32
MAX_EXHAUSTIVE_PERFECT = 16
AUTO_EXHAUSTIVE_LIMIT = 12


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _check_size(G, cap=MAX_EXACT_VERTICES):
    if G.n > cap:
        raise ResourceError(f"{G.n} vertices exceed the exact-solver cap {cap}")


def induced_graph(c: PairColoring, points: Sequence) -> FiniteGraph:
    """Colour-1 graph of ``c`` on ``points`` (vertex i = points[i])."""
    return c.restrict(points).graph()


# -- cliques ----------------------------------------------------------------


def max_clique(G: FiniteGraph, within: int | None = None) -> list[int]:
    """A maximum clique (lexicographically first among those found)."""
    _check_size(G)
    adj = G.adj
    best = 0

    def rec(R, size, P):
        nonlocal best
        if not P:
            if size > best.bit_count():
                best = R
            return
        if size + P.bit_count() <= best.bit_count():
            return
        while P:
            if size + P.bit_count() <= best.bit_count():
                return
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            rec(R | low, size + 1, P & adj[v])

    rec(0, 0, G.full if within is None else within)
    return list(_bits(best))


def clique_number(G: FiniteGraph) -> int:
    return len(max_clique(G))


def max_independent_set(G: FiniteGraph) -> list[int]:
    return max_clique(G.complement())


# -- colouring --------------------------------------------------------------


def greedy_coloring(G: FiniteGraph, order: Sequence[int] | None = None) -> list[int]:
    order = range(G.n) if order is None else order
    col = [-1] * G.n
    for v in order:
        taken = {col[u] for u in _bits(G.adj[v]) if col[u] >= 0}
        col[v] = next(c for c in itertools.count() if c not in taken)
    return col


def optimal_coloring(G: FiniteGraph) -> list[int]:
    """Exact minimum colouring by DSATUR branch and bound, bounded below by
    the clique number and seeded with a greedy colouring."""
    _check_size(G)
    n = G.n
    if n == 0:
        return []
    best = greedy_coloring(G)
    best_k = max(best) + 1
    lower = clique_number(G)
    if best_k == lower:
        return best
    adj = G.adj
    col = [-1] * n

    def pick():
        top, pick_v = None, -1
        for v in range(n):
            if col[v] >= 0:
                continue
            sat = len({col[u] for u in _bits(adj[v]) if col[u] >= 0})
            deg = sum(1 for u in _bits(adj[v]) if col[u] < 0)
            key = (sat, deg)
            if top is None or key > top:
                top, pick_v = key, v
        return pick_v

    def rec(colored, k):
        nonlocal best, best_k
        if k >= best_k:
            return
        if colored == n:
            best, best_k = list(col), k
            return
        v = pick()
        taken = {col[u] for u in _bits(adj[v]) if col[u] >= 0}
        for c in range(min(k + 1, best_k - 1)):
            if c in taken:
                continue
            col[v] = c
            rec(colored + 1, max(k, c + 1))
            col[v] = -1
            if best_k == lower:
                return

    rec(0, 0)
    return best


def chromatic_number(G: FiniteGraph) -> int:
    if G.n == 0:
        return 0
    return max(optimal_coloring(G)) + 1


# -- the lexicographic parity poset ----------------------------------------


class LexPoset:
    """``x <= y`` iff ``x == y`` or ``Delta(x, y)`` is odd and ``x`` is
    lexicographically before ``y``.  Comparable pairs are exactly the pairs
    of odd Delta."""

    def __init__(self, points: Sequence[Sequence[int]], check: bool = True):
        self.points = [tuple(p) for p in points]
        if len(set(self.points)) != len(self.points):
            raise UsageError("poset points must be distinct")
        n = len(self.points)
        self.below = [0] * n  # bit j set: points[j] < points[i]
        for i, j in itertools.permutations(range(n), 2):
            x, y = self.points[i], self.points[j]
            if delta(x, y) & 1 and x < y:
                self.below[j] |= 1 << i
        if check:
            self.check_axioms()

    def leq(self, i: int, j: int) -> bool:
        return i == j or bool(self.below[j] >> i & 1)

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    def check_axioms(self):
        n = len(self.points)
        for i, j in itertools.permutations(range(n), 2):
            if self.leq(i, j) and self.leq(j, i):
                raise InternalError(f"antisymmetry fails for {self.points[i]}, {self.points[j]}")
        for i, j, k in itertools.permutations(range(n), 3):
            if self.leq(i, j) and self.leq(j, k) and not self.leq(i, k):
                raise InternalError(
                    f"transitivity fails for {self.points[i]}, {self.points[j]}, {self.points[k]}")

    def __len__(self):
        return len(self.points)


def lex_poset(points: Sequence[Sequence[int]]) -> LexPoset:
    return LexPoset(points)


def mirsky_antichain_cover(P: LexPoset) -> list[int]:
    """Height of each point (1 = minimal); equal heights form antichains."""
    n = len(P)
    height = [0] * n
    # x < y implies x precedes y lexicographically, so lex order is a linear extension
    for j in sorted(range(n), key=lambda i: P.points[i]):
        height[j] = 1 + max((height[i] for i in _bits(P.below[j])), default=0)
    return height


# -- perfection -------------------------------------------------------------


@dataclass
class PerfectResult:
    perfect: bool
    witness: list | None = None  # vertices of the failing subgraph / hole
    kind: str | None = None  # "subgraph", "hole" or "antihole"

    def __bool__(self):
        return self.perfect


def _clique_table(G: FiniteGraph) -> list[int]:
    """Clique number of every induced subgraph, indexed by vertex mask."""
    n = G.n
    omega = [0] * (1 << n)
    for S in range(1, 1 << n):
        v = S.bit_length() - 1
        rest = S ^ (1 << v)
        omega[S] = max(omega[rest], 1 + omega[rest & G.adj[v]])
    return omega


def _perfect_exhaustive(G: FiniteGraph) -> PerfectResult:
    if G.n > MAX_EXHAUSTIVE_PERFECT:
        raise ResourceError(f"exhaustive perfection check is capped at {MAX_EXHAUSTIVE_PERFECT} vertices")
    omega = _clique_table(G)
    adj = G.adj
    for size in range(1, G.n + 1):
        for vs in itertools.combinations(range(G.n), size):
            S = sum(1 << v for v in vs)
            # first-fit in index order; exact search only when it overshoots
            classes: list[int] = []
            for v in vs:
                for ci, cls in enumerate(classes):
                    if not adj[v] & cls:
                        classes[ci] |= 1 << v
                        break
                else:
                    classes.append(1 << v)
            if len(classes) == omega[S]:
                continue
            if chromatic_number(G.induced(vs)) != omega[S]:
                return PerfectResult(False, list(vs), "subgraph")
    return PerfectResult(True)


def find_odd_hole(G: FiniteGraph, min_len: int = 5) -> list[int] | None:
    """An induced odd cycle of length >= ``min_len`` (smallest start vertex
    first), or ``None``."""
    adj = G.adj

    def extend(path, inner):
        s, last = path[0], path[-1]
        for v in _bits(adj[last]):
            if v <= s or (inner >> v & 1) or v == last:
                continue
            if adj[v] & (inner & ~(1 << last)):
                continue  # chord to an interior vertex
            if adj[v] >> s & 1:
                if len(path) >= 2 and (len(path) + 1) % 2 == 1 and len(path) + 1 >= min_len:
                    return path + [v]
                continue  # closing too early or with even length
            found = extend(path + [v], inner | (1 << v))
            if found:
                return found
        return None

    for s in range(G.n):
        for p1 in _bits(adj[s]):
            if p1 <= s:
                continue
            found = extend([s, p1], 1 << p1)
            if found:
                return found
    return None


def _perfect_holes(G: FiniteGraph) -> PerfectResult:
    _check_size(G)
    hole = find_odd_hole(G)
    if hole:
        return PerfectResult(False, hole, "hole")
    anti = find_odd_hole(G.complement())
    if anti:
        return PerfectResult(False, anti, "antihole")
    return PerfectResult(True)


def is_perfect(G: FiniteGraph, mode: str = "auto") -> PerfectResult:
    """``mode``: ``exhaustive`` (chi = omega on every induced subgraph),
    ``holes`` (no induced odd hole or antihole of length >= 5), or ``auto``
    (exhaustive up to 12 vertices)."""
    if mode == "auto":
        mode = "exhaustive" if G.n <= AUTO_EXHAUSTIVE_LIMIT else "holes"
    if mode == "exhaustive":
        return _perfect_exhaustive(G)
    if mode == "holes":
        return _perfect_holes(G)
    raise UsageError(f"unknown mode {mode!r}")


def is_induced_cycle(G: FiniteGraph) -> bool:
    """Is ``G`` itself a cycle (connected, 2-regular, >= 3 vertices)?"""
    if G.n < 3 or any(G.degree(v) != 2 for v in range(G.n)):
        return False
    seen, stack = {0}, [0]
    while stack:
        for u in _bits(G.adj[stack.pop()]):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == G.n


def cycle_graph(n: int) -> FiniteGraph:
    return FiniteGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> FiniteGraph:
    return FiniteGraph(n, itertools.combinations(range(n), 2))


# -- realising graphs inside c_max -----------------------------------------


def compact_rado_labels(G: FiniteGraph, max_label: int) -> list[int] | None:
    """Lexicographically first induced embedding of ``G`` into the Rado
    graph on ``0..N-1`` for the least ``N <= max_label + 1``."""
    for N in range(G.n, max_label + 2):
        image = find_induced_embedding(G, rado_graph(N))
        if image is not None:
            return image
    return None


def realize_graph_in_cmax(G: FiniteGraph, max_depth: int = 40) -> list[tuple] | None:
    """Points of a factorial space whose c_max colour-1 graph is ``G``.

    All points share the zero stem of length ``L = 1 + max label`` and
    diverge at level ``L`` with the Rado labels as digits.
    """
    if G.n == 0:
        return []
    if G.n == 1:
        return [(0, 0)] if max_depth >= 2 else None
    labels = compact_rado_labels(G, max_depth - 2)
    if labels is None:
        return None
    L = 1 + max(labels)
    if L + 1 > max_depth:
        return None
    return [(0,) * L + (z,) for z in labels]


# -- homogeneous subsets of perfect graphs ---------------------------------


def sqrt_homogeneous_bound(G: FiniteGraph | PairColoring) -> tuple[str, list[int]]:
    """A clique or independent set of size at least ``floor(sqrt(m))``."""
    if isinstance(G, PairColoring):
        G = G.graph()
    m = G.n
    if m == 0:
        return "clique", []
    cl, ind = max_clique(G), max_independent_set(G)
    kind, best = ("clique", cl) if len(cl) >= len(ind) else ("independent", ind)
    if len(best) < math.isqrt(m):
        raise ContractError(f"no homogeneous set of size {math.isqrt(m)}: graph is not perfect")
    return kind, best


# -- paths ------------------------------------------------------------------


def induced_paths(G: FiniteGraph, min_vertices: int = 3) -> Iterator[list[int]]:
    """Every induced path with at least ``min_vertices`` vertices, each
    listed once (first vertex smaller than last)."""
    adj = G.adj

    def rec(path, inner_mask):
        if len(path) >= min_vertices and path[0] < path[-1]:
            yield list(path)
        last = path[-1]
        for v in _bits(adj[last]):
            if inner_mask >> v & 1:
                continue
            if adj[v] & (inner_mask & ~(1 << last)):
                continue
            path.append(v)
            yield from rec(path, inner_mask | (1 << v))
            path.pop()

    for s in range(G.n):
        yield from rec([s], 1 << s)
