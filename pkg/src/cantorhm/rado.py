"""A computable copy of the Rado graph and induced-embedding search.

Vertices are naturals; ``a < b`` are adjacent iff bit ``a`` of ``b`` is set.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import ParseError, ResourceError, UsageError

DEFAULT_LABEL_BITS = 1 << 16


def rado_edge(m: int, n: int) -> int:
    if m == n:
        raise UsageError(f"rado_edge({m}, {n}): the graph is irreflexive")
    if m < 0 or n < 0:
        raise UsageError("rado vertices are naturals")
    a, b = (m, n) if m < n else (n, m)
    return (b >> a) & 1


def extension_witness(U: Iterable[int], V: Iterable[int]) -> int:
    """A vertex adjacent to all of ``U`` and to none of ``V``."""
    U, V = set(U), set(V)
    if U & V:
        raise UsageError(f"U and V overlap in {sorted(U & V)}")
    top = 1 + max(U | V | {0})
    return (1 << top) + sum(1 << u for u in U)


class FiniteGraph:
    """Simple undirected graph on ``0..n-1`` stored as adjacency bitmasks."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise UsageError("vertex count must be >= 0")
        self.n = n
        self.adj = [0] * n
        for i, j in edges:
            self.add_edge(i, j)

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "FiniteGraph":
        g = cls(len(masks))
        g.adj = list(masks)
        return g

    def add_edge(self, i: int, j: int):
        if i == j:
            raise UsageError(f"self-loop at {i}")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise UsageError(f"edge ({i}, {j}) out of range for n={self.n}")
        self.adj[i] |= 1 << j
        self.adj[j] |= 1 << i

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.adj[i] >> j & 1]

    def degree(self, i: int) -> int:
        return self.adj[i].bit_count()

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def complement(self) -> "FiniteGraph":
        full = self.full
        return FiniteGraph.from_masks([full & ~m & ~(1 << i) for i, m in enumerate(self.adj)])

    def induced(self, vertices: Sequence[int]) -> "FiniteGraph":
        vs = list(vertices)
        g = FiniteGraph(len(vs))
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                if self.has_edge(vs[a], vs[b]):
                    g.add_edge(a, b)
        return g

    def __eq__(self, other):
        return isinstance(other, FiniteGraph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, tuple(self.adj)))

    def __repr__(self):
        return f"FiniteGraph({self.n}, {self.edges()})"

    # text format: "graph <n>" then "e <i> <j>" per edge
    def to_text(self) -> str:
        lines = [f"graph {self.n}"] + [f"e {i} {j}" for i, j in self.edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FiniteGraph":
        g = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if g is None:
                    if parts[0] != "graph" or len(parts) != 2:
                        raise ParseError("expected 'graph <n>'", lineno)
                    g = cls(int(parts[1]))
                elif parts[0] == "e" and len(parts) == 3:
                    g.add_edge(int(parts[1]), int(parts[2]))
                else:
                    raise ParseError(f"unexpected line {line!r}", lineno)
            except ParseError:
                raise
            except (ValueError, UsageError) as exc:
                raise ParseError(str(exc), lineno) from None
        if g is None:
            raise ParseError("empty graph file")
        return g


def rado_graph(n: int) -> FiniteGraph:
    """The Rado graph restricted to ``{0, ..., n-1}``."""
    g = FiniteGraph(n)
    for b in range(n):
        for a in range(b):
            if b >> a & 1:
                g.add_edge(a, b)
    return g


def is_induced_embedding(G: FiniteGraph, image: Sequence[int], edge=rado_edge) -> bool:
    """Does ``image`` (injective) reproduce edges and non-edges of ``G`` under ``edge``?"""
    if len(set(image)) != len(image) or len(image) != G.n:
        return False
    for i in range(G.n):
        for j in range(i + 1, G.n):
            if bool(edge(image[i], image[j])) != G.has_edge(i, j):
                return False
    return True


def least_with_bits(t: int, ones: int, fixed: int) -> int:
    """Least ``z >= t`` with ``z & fixed == ones``."""
    viol = (t ^ ones) & fixed
    if not viol:
        return t
    i = viol.bit_length() - 1  # highest violated position
    if ones >> i & 1:
        # raise bit i, keep what is above, minimise below
        return (t >> (i + 1) << (i + 1)) | (1 << i) | (ones & ((1 << i) - 1))
    # bit i must drop: carry into the lowest free zero above i
    free_zero = ~fixed & ~t & ~((1 << (i + 1)) - 1)
    j = (free_zero & -free_zero).bit_length() - 1
    return (t >> (j + 1) << (j + 1)) | (1 << j) | (ones & ((1 << j) - 1))


def embed_graph(G: FiniteGraph, max_bits: int = DEFAULT_LABEL_BITS) -> list[int]:
    """Greedy induced embedding into the Rado graph.

    Vertices are placed one at a time with increasing labels; a new label
    is the least number above the previous one whose bits at the earlier
    labels spell out the required adjacencies (an extension witness, never
    above the one from :func:`extension_witness`).  Input order is tried
    first; if some label would need more than ``max_bits`` bits, other
    placement orders are searched depth-first, smallest next label first.
    Raises :class:`ResourceError` if no order fits.
    """
    n = G.n
    image = [0] * n

    def label_for(v, placed, last):
        ones = fixed = 0
        for u in placed:
            z = image[u]
            if z >= max_bits:
                # bit z of a label below 2**max_bits is always clear
                if G.has_edge(u, v):
                    return None
                continue
            fixed |= 1 << z
            if G.has_edge(u, v):
                ones |= 1 << z
        z = least_with_bits(last + 1, ones, fixed)
        return z if z.bit_length() <= max_bits else None

    def rec(placed, rest, last, greedy_only):
        if not rest:
            return True
        options = []
        for v in rest:
            z = label_for(v, placed, last)
            if z is not None:
                options.append((z, v))
                if greedy_only:
                    break
        if greedy_only and (not options or options[0][1] != rest[0]):
            return False
        for z, v in sorted(options):
            image[v] = z
            if rec(placed + [v], [w for w in rest if w != v], z, greedy_only):
                return True
        return False

    if n == 0:
        return []
    if rec([], list(range(n)), -1, True) or rec([], list(range(n)), -1, False):
        return list(image)
    raise ResourceError(f"no placement order keeps Rado labels within {max_bits} bits")


def find_induced_embedding(pattern: FiniteGraph, target: FiniteGraph) -> list[int] | None:
    """Lexicographically first induced embedding of ``pattern`` into ``target``.

    Plain backtracking over pattern vertices in order; candidates are kept
    as bitmasks and pruned by degree and co-degree.
    """
    k, n = pattern.n, target.n
    if k == 0:
        return []
    if k > n:
        return None
    tfull = target.full
    tnon = [tfull & ~m & ~(1 << u) for u, m in enumerate(target.adj)]
    allowed = []
    for v in range(k):
        deg, codeg = pattern.degree(v), k - 1 - pattern.degree(v)
        mask = 0
        for u in range(n):
            if target.degree(u) >= deg and n - 1 - target.degree(u) >= codeg:
                mask |= 1 << u
        allowed.append(mask)

    image = [0] * k

    def extend(v, cand_masks):
        if v == k:
            return True
        cands = cand_masks[v]
        while cands:
            low = cands & -cands
            u = low.bit_length() - 1
            cands ^= low
            image[v] = u
            nxt = list(cand_masks)
            ok = True
            for w in range(v + 1, k):
                m = nxt[w] & ~low
                m &= target.adj[u] if pattern.has_edge(v, w) else tnon[u]
                if not m:
                    ok = False
                    break
                nxt[w] = m
            if ok and extend(v + 1, nxt):
                return True
        return False

    return image if extend(0, allowed) else None


def norm(c) -> int:
    """Largest ``n`` such that the Rado graph on ``0..n-1`` embeds induced
    into the colour-1 graph of ``c``.

    ``c`` is a :class:`~cantorhm.colorings.PairColoring` or a
    :class:`FiniteGraph` (taken as the colour-1 graph).
    """
    G = c if isinstance(c, FiniteGraph) else c.graph()
    n = 0
    # Rado on 0..n-1 is induced in Rado on 0..n, so the first failure is final.
    while n < G.n and find_induced_embedding(rado_graph(n + 1), G) is not None:
        n += 1
    return n
