"""Pair-colorings of finite point sets and the builtin colorings.

A :class:`PairColoring` stores its colour-1 graph as one adjacency bitmask
per carrier point, so solvers get O(1) colour queries and can run clique
searches directly on ``rows``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .errors import ParseError, UsageError
from .rado import FiniteGraph, rado_edge
from .seqspace import (
    TruncatedSpace,
    delta,
    enumerate_points,
    format_point,
    format_space,
    parse_point,
    parse_space,
)


class PairColoring:
    """A symmetric ``{0,1}`` colouring of the pairs of a finite carrier."""

    __slots__ = ("carrier", "index", "rows", "name", "space")

    def __init__(self, carrier: Sequence[Hashable], rows: Sequence[int], name: str = "table",
                 space: TruncatedSpace | None = None):
        self.carrier = tuple(carrier)
        self.index = {p: i for i, p in enumerate(self.carrier)}
        if len(self.index) != len(self.carrier):
            raise UsageError("carrier has duplicate points")
        self.rows = list(rows)
        self.name = name
        self.space = space

    @classmethod
    def from_function(cls, carrier: Iterable[Hashable], fn: Callable, name: str = "table",
                      space: TruncatedSpace | None = None) -> "PairColoring":
        carrier = tuple(carrier)
        n = len(carrier)
        rows = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                if fn(carrier[i], carrier[j]):
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
        return cls(carrier, rows, name, space)

    @classmethod
    def from_graph(cls, G: FiniteGraph, carrier: Sequence[Hashable] | None = None,
                   name: str = "graph") -> "PairColoring":
        carrier = range(G.n) if carrier is None else carrier
        return cls(carrier, G.adj, name)

    @property
    def n(self) -> int:
        return len(self.carrier)

    def color(self, x, y) -> int:
        i, j = self.index[x], self.index[y]
        if i == j:
            raise UsageError(f"colour of the diagonal pair ({x!r}, {x!r}) is undefined")
        return self.rows[i] >> j & 1

    def color_idx(self, i: int, j: int) -> int:
        return self.rows[i] >> j & 1

    def graph(self) -> FiniteGraph:
        """Colour-1 graph on carrier indices."""
        return FiniteGraph.from_masks(self.rows)

    def restrict(self, points: Iterable[Hashable]) -> "PairColoring":
        pts = list(points)
        idx = [self.index[p] for p in pts]
        rows = []
        for a in idx:
            r = 0
            for b_pos, b in enumerate(idx):
                if a != b and self.rows[a] >> b & 1:
                    r |= 1 << b_pos
            rows.append(r)
        return PairColoring(pts, rows, self.name, self.space)

    def pairs(self):
        """Yield ``(x, y, colour)`` for every unordered pair, carrier order."""
        c = self.carrier
        for i in range(len(c)):
            for j in range(i + 1, len(c)):
                yield c[i], c[j], self.rows[i] >> j & 1

    def swapped(self) -> "PairColoring":
        """Same carrier, colours 0 and 1 exchanged."""
        full = (1 << self.n) - 1
        rows = [full & ~r & ~(1 << i) for i, r in enumerate(self.rows)]
        return PairColoring(self.carrier, rows, self.name + "~", self.space)

    def __eq__(self, other):
        return (isinstance(other, PairColoring) and self.carrier == other.carrier
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.carrier, tuple(self.rows)))

    def __repr__(self):
        return f"<PairColoring {self.name} on {self.n} points>"

    # table text: "space <spec>" then "pair <x> <y> <0|1>" once per pair
    def to_table_text(self) -> str:
        if self.space is None:
            raise UsageError("only colorings over a truncated space have a table form")
        lines = [f"space {format_space(self.space)}"]
        for x, y, col in self.pairs():
            lines.append(f"pair {format_point(x, self.space)} {format_point(y, self.space)} {col}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_table_text(cls, text: str, name: str = "table") -> "PairColoring":
        space = None
        seen: dict[frozenset, int] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if space is None:
                if parts[0] != "space" or len(parts) != 2:
                    raise ParseError("expected 'space <spec>'", lineno)
                try:
                    space = parse_space(parts[1])
                except UsageError as exc:
                    raise ParseError(str(exc), lineno) from None
                continue
            if parts[0] != "pair" or len(parts) != 4 or parts[3] not in ("0", "1"):
                raise ParseError(f"expected 'pair <x> <y> <0|1>', got {line!r}", lineno)
            try:
                x, y = parse_point(parts[1], space), parse_point(parts[2], space)
            except UsageError as exc:
                raise ParseError(str(exc), lineno) from None
            if x == y:
                raise ParseError("pair of equal points", lineno)
            key = frozenset((x, y))
            if key in seen:
                raise ParseError(f"duplicate pair {parts[1]} {parts[2]}", lineno)
            seen[key] = int(parts[3])
        if space is None:
            raise ParseError("empty coloring file")
        pts = enumerate_points(space)
        missing = len(pts) * (len(pts) - 1) // 2 - len(seen)
        if missing:
            raise ParseError(f"{missing} pairs missing from table")
        return cls.from_function(pts, lambda x, y: seen[frozenset((x, y))], name, space)


# -- builtin colorings ------------------------------------------------------


def parity_color(x, y):
    return delta(x, y) & 1


def c_parity(space: TruncatedSpace) -> PairColoring:
    return PairColoring.from_function(enumerate_points(space), parity_color, "cparity", space)


def c_min(space: TruncatedSpace | int) -> PairColoring:
    if isinstance(space, int):
        space = TruncatedSpace.binary(space)
    if not space.is_binary:
        raise UsageError("c_min lives on a binary space")
    return PairColoring.from_function(enumerate_points(space), parity_color, "cmin", space)


def c_random_color(x, y) -> int:
    """Rado edge between the diverging digits of ``x`` and ``y``.

    Reads the digits at the first difference itself (not one level
    later), which is what makes this an almost node-colouring.
    """
    n = delta(x, y)
    if n is None:
        raise UsageError("c_random is undefined on equal points")
    return rado_edge(x[n], y[n])


def c_random_coloring(space: TruncatedSpace) -> PairColoring:
    return PairColoring.from_function(enumerate_points(space), c_random_color, "crandom", space)


def c_max(depth: int) -> PairColoring:
    if depth < 2:
        raise UsageError("c_max needs depth >= 2 (level 0 has a single digit)")
    space = TruncatedSpace.factorial(depth)
    return PairColoring.from_function(enumerate_points(space), c_random_color, "cmax", space)


def ars_coloring(n: int) -> PairColoring:
    """Grid ``n x n``; a pair is colour 0 iff it is the graph of an injection."""
    if n < 1:
        raise UsageError("grid size must be >= 1")
    grid = [(i, j) for i in range(n) for j in range(n)]
    return PairColoring.from_function(
        grid, lambda p, q: int(p[0] == q[0] or p[1] == q[1]), "ars")


# -- almost node-colorings --------------------------------------------------


@dataclass(frozen=True)
class AlmostNodeColoring:
    """Leaves of a finite tree plus a colouring ``local[t][(a, b)]`` of the
    successor digits ``a < b`` of every splitting node ``t``."""

    leaves: tuple
    local: dict

    def __post_init__(self):
        if len({len(x) for x in self.leaves}) > 1:
            raise UsageError("leaves must have uniform depth")
        for t, succ in _successors(self.leaves).items():
            if len(succ) < 2:
                continue
            table = self.local.get(t)
            for a, b in itertools.combinations(sorted(succ), 2):
                if table is None or (a, b) not in table:
                    raise UsageError(f"node {t!r} has no colour for successors ({a}, {b})")

    @classmethod
    def from_rule(cls, leaves: Iterable[tuple], rule: Callable[[tuple, int, int], int]):
        """``rule(t, a, b)`` colours successors ``a < b`` of node ``t``."""
        leaves = tuple(sorted(set(map(tuple, leaves))))
        local = {}
        for t, succ in _successors(leaves).items():
            if len(succ) >= 2:
                local[t] = {(a, b): rule(t, a, b) for a, b in itertools.combinations(sorted(succ), 2)}
        return cls(leaves, local)

    @classmethod
    def node_coloring(cls, leaves: Iterable[tuple], node_color: Callable[[tuple], int]):
        return cls.from_rule(leaves, lambda t, a, b: node_color(t))


def _successors(leaves) -> dict:
    succ: dict[tuple, set] = {}
    for x in leaves:
        for l in range(len(x)):
            succ.setdefault(x[:l], set()).add(x[l])
    return succ


def eval_almost_node(anc: AlmostNodeColoring, space: TruncatedSpace | None = None) -> PairColoring:
    if len(anc.leaves) < 2:
        raise UsageError("need at least two leaves")

    def col(x, y):
        n = delta(x, y)
        a, b = sorted((x[n], y[n]))
        return anc.local[x[:n]][(a, b)]

    return PairColoring.from_function(anc.leaves, col, "almost-node", space)


def is_almost_node(c: PairColoring, points: Iterable | None = None) -> bool:
    """Is the colour of every pair fixed by the two prefixes of length Delta+1?"""
    pts = list(c.carrier if points is None else points)
    seen: dict = {}
    for x, y in itertools.combinations(pts, 2):
        n = delta(x, y)
        key = tuple(sorted((x[:n + 1], y[:n + 1])))
        col = c.color(x, y)
        if seen.setdefault(key, col) != col:
            return False
    return True


# -- modulus and regrouping -------------------------------------------------


def modulus(c: PairColoring) -> list[int]:
    """Least nondecreasing majorant ``f`` (``f(0) >= 1``, strictly increasing
    until it hits the depth) such that pairs with ``Delta = n`` are coloured
    as a function of their ``f(n)``-prefixes."""
    space = c.space
    if space is None or not space.is_binary or c.n != space.size():
        raise UsageError("modulus needs a coloring of a full binary space")
    d = space.depth
    by_delta: dict[int, list] = {n: [] for n in range(d)}
    for x, y, col in c.pairs():
        by_delta[delta(x, y)].append((x, y, col))

    def determined(n, m):
        seen = {}
        for x, y, col in by_delta[n]:
            key = tuple(sorted((x[:m], y[:m])))
            if seen.setdefault(key, col) != col:
                return False
        return True

    f = []
    for n in range(d):
        raw = next(m for m in range(d + 1) if determined(n, m))
        floor = 1 if n == 0 else f[-1] + 1
        f.append(min(d, max(raw, floor)))
    return f


def modulus_levels(f: Sequence[int], depth: int) -> list[int]:
    """The iterates ``0, f(0), f(f(0)), ...`` up to and including ``depth``."""
    g = [0]
    while g[-1] < depth:
        nxt = f[g[-1]]
        if nxt <= g[-1]:
            raise UsageError("modulus must be strictly increasing below the depth")
        g.append(nxt)
    return g


def regroup_space(g: Sequence[int]) -> TruncatedSpace:
    return TruncatedSpace.custom([1 << gi for gi in g])


def regroup_embed(x: Sequence[int], g: Sequence[int]) -> tuple:
    """Digit ``i`` is the prefix ``x[:g[i]]`` read as a binary numeral."""
    if any(b <= a for a, b in zip(g, g[1:])):
        raise UsageError(f"level sequence {list(g)} is not strictly increasing")
    if g and (g[0] < 0 or g[-1] > len(x)):
        raise UsageError(f"level sequence {list(g)} exceeds depth {len(x)}")
    out = []
    for gi in g:
        v = 0
        for bit in x[:gi]:
            v = 2 * v + bit
        out.append(v)
    return tuple(out)


# -- parity blocks ----------------------------------------------------------


def parity_block_embed(x: Sequence[int]) -> tuple:
    """Concatenate one block per digit: even positions give ``0^(2k) 11``,
    odd positions ``0^(2k+1) 1``."""
    out: list[int] = []
    for n, k in enumerate(x):
        if n % 2 == 0:
            out.extend([0] * (2 * k) + [1, 1])
        else:
            out.extend([0] * (2 * k + 1) + [1])
    return tuple(out)


def pad(x: Sequence[int], length: int) -> tuple:
    """Right-pad with zeros (never truncates)."""
    return tuple(x) + (0,) * max(0, length - len(x))


# -- reducedness ------------------------------------------------------------


def is_reduced(c: PairColoring, max_stem: int) -> bool:
    """No cylinder with stem length ``<= max_stem`` and >= 2 carrier points
    is homogeneous."""
    space = c.space
    if space is None:
        raise UsageError("is_reduced needs a coloring over a truncated space")
    if not 0 <= max_stem <= space.depth - 1:
        raise UsageError(f"max_stem must lie in [0, {space.depth - 1}]")
    for L in range(max_stem + 1):
        groups: dict[tuple, list[int]] = {}
        for i, x in enumerate(c.carrier):
            groups.setdefault(x[:L], []).append(i)
        for members in groups.values():
            if len(members) < 2:
                continue
            mask = sum(1 << i for i in members)
            colors = set()
            for i in members:
                others = mask & ~(1 << i)
                if c.rows[i] & others:
                    colors.add(1)
                if others & ~c.rows[i]:
                    colors.add(0)
            if len(colors) < 2:
                return False
    return True
