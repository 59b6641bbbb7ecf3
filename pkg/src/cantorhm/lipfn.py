"""Dyadic Lipschitz self-maps of truncated binary space.

A map has exponent ``e`` when ``Delta(f(x), f(y)) >= Delta(x, y) - e`` for
all ``x != y`` (equal values count as infinitely close), i.e. it is
``2**e``-Lipschitz for ``dist = 2**-Delta``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ContractError, ParseError, ResourceError, UsageError
from .homog import MaxHomTree
from .seqspace import (
    TruncatedSpace,
    delta,
    enumerate_points,
    format_point,
    format_space,
    interleave,
    parse_point,
    parse_space,
)

NEG_INF = -math.inf
GRAPH, INVERSE = "graph", "inverse"
# digit appended when a map consumes the leading digit of its argument
PAD_DIGIT = 0
DEFAULT_MAX_DEPTH = 3
DEFAULT_CANDIDATE_CAP = 200_000


def lip_exponent(table: Mapping) -> float | int:
    """Least exponent of a total value table; ``-inf`` for constant maps."""
    pts = list(table)
    best = NEG_INF
    for x, y in itertools.combinations(pts, 2):
        fx, fy = table[x], table[y]
        if fx == fy:
            continue
        best = max(best, delta(x, y) - delta(fx, fy))
    return best


def _fmt_exp(e):
    return "-inf" if e == NEG_INF else str(int(e))


def _parse_exp(s):
    return NEG_INF if s == "-inf" else int(s)


class LipMap:
    """Total map of a truncated space into itself with a claimed exponent."""

    __slots__ = ("space", "table", "exponent")

    def __init__(self, space: TruncatedSpace, table: Mapping, exponent=None, check: bool = True):
        self.space = space
        self.table = {tuple(k): tuple(v) for k, v in table.items()}
        actual = lip_exponent(self.table)
        self.exponent = actual if exponent is None else exponent
        if check:
            pts = enumerate_points(space)
            if len(self.table) != len(pts) or any(p not in self.table for p in pts):
                raise ContractError("value table is not total on the space")
            for v in self.table.values():
                space.check(v)
            if actual > self.exponent:
                raise ContractError(
                    f"map has exponent {_fmt_exp(actual)}, claimed {_fmt_exp(self.exponent)}")

    @classmethod
    def from_function(cls, space: TruncatedSpace, fn, exponent=None, check: bool = True):
        return cls(space, {x: fn(x) for x in enumerate_points(space)}, exponent, check)

    def __call__(self, x):
        return self.table[tuple(x)]

    @property
    def depth(self) -> int:
        return self.space.depth

    def values(self) -> tuple:
        """Values in lexicographic order of the arguments."""
        return tuple(self.table[x] for x in sorted(self.table))

    def fixed_points(self) -> list:
        return [x for x, v in sorted(self.table.items()) if x == v]

    def __eq__(self, other):
        return isinstance(other, LipMap) and self.space == other.space and self.table == other.table

    def __hash__(self):
        return hash((self.space, self.values()))

    def __repr__(self):
        return f"LipMap({format_space(self.space)}, exp={_fmt_exp(self.exponent)})"

    # text: "lipmap <space> <exponent>" then "map <x> <y>" per domain point
    def to_text(self) -> str:
        sp = self.space
        lines = [f"lipmap {format_space(sp)} {_fmt_exp(self.exponent)}"]
        lines += [f"map {format_point(x, sp)} {format_point(y, sp)}" for x, y in sorted(self.table.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LipMap":
        space = exp = None
        table = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if space is None:
                    if parts[0] != "lipmap" or len(parts) != 3:
                        raise ParseError("expected 'lipmap <space> <exponent>'", lineno)
                    space, exp = parse_space(parts[1]), _parse_exp(parts[2])
                elif parts[0] == "map" and len(parts) == 3:
                    x = parse_point(parts[1], space)
                    if x in table:
                        raise ParseError(f"duplicate argument {parts[1]}", lineno)
                    table[x] = parse_point(parts[2], space)
                else:
                    raise ParseError(f"unexpected line {line!r}", lineno)
            except ParseError:
                raise
            except (ValueError, UsageError) as exc:
                raise ParseError(str(exc), lineno) from None
        if space is None:
            raise ParseError("empty lipmap file")
        return cls(space, table, exp)


def identity_map(d: int) -> LipMap:
    return LipMap.from_function(TruncatedSpace.binary(d), lambda x: x, 0)


def constant_map(d: int, value: Sequence[int]) -> LipMap:
    value = tuple(value)
    return LipMap.from_function(TruncatedSpace.binary(d), lambda x: value, NEG_INF)


# -- enumeration of all maps with a given exponent bound -------------------


def _dependency_lengths(d: int, e: int) -> list[int]:
    """Output digit ``k`` may depend on the first ``m_k`` input digits."""
    return [min(d, max(0, k + 1 + e)) for k in range(d)]


def count_lip_maps(d: int, e: int) -> int:
    return 1 << sum(1 << m for m in _dependency_lengths(d, e))


def enumerate_lip_tables(d: int, e: int, cap: int = DEFAULT_CANDIDATE_CAP) -> Iterator[tuple]:
    """Value tuples (aligned with ``enumerate_points``) of every map of
    exponent ``<= e`` on binary depth ``d``."""
    count = count_lip_maps(d, e)
    if count > cap:
        raise ResourceError(f"{count} maps of exponent <= {e} at depth {d} exceed cap {cap}")
    ms = _dependency_lengths(d, e)
    pts = enumerate_points(TruncatedSpace.binary(d))
    slots = [(k, pre) for k, m in enumerate(ms) for pre in itertools.product((0, 1), repeat=m)]
    for bits in itertools.product((0, 1), repeat=len(slots)):
        digit = dict(zip(slots, bits))
        yield tuple(tuple(digit[(k, x[:ms[k]])] for k in range(d)) for x in pts)


def random_lip_map(d: int, e: int, rng: random.Random) -> LipMap:
    """Uniform sample among maps of exponent ``<= e``."""
    ms = _dependency_lengths(d, e)
    digit = {}
    space = TruncatedSpace.binary(d)

    def f(x):
        out = []
        for k in range(d):
            key = (k, x[:ms[k]])
            if key not in digit:
                digit[key] = rng.randrange(2)
            out.append(digit[key])
        return tuple(out)

    return LipMap.from_function(space, f, e)


# -- homogeneous trees <-> Lipschitz maps ----------------------------------


def hom_to_lip(H: MaxHomTree) -> LipMap:
    """Colour-0 tree -> the exponent-0 map with ``x (x) f(x)`` on a branch."""
    if H.color != 0:
        raise UsageError("hom_to_lip needs a colour-0 tree")
    ch = H.choice_map
    d = H.depth // 2

    def f(x):
        t, y = (), []
        for k in range(d):
            t += (x[k],)
            y.append(ch[t])
            t += (y[-1],)
        return tuple(y)

    return LipMap.from_function(TruncatedSpace.binary(d), f, 0)


def hom_to_lip_c1(H: MaxHomTree) -> LipMap:
    """Colour-1 tree -> the exponent-(-1) map with ``f(x) (x) x`` on a branch."""
    if H.color != 1:
        raise UsageError("hom_to_lip_c1 needs a colour-1 tree")
    ch = H.choice_map
    d = H.depth // 2

    def f(x):
        t, y = (), []
        for k in range(d):
            y.append(ch[t])
            t += (y[-1], x[k])
        return tuple(y)

    return LipMap.from_function(TruncatedSpace.binary(d), f, -1)


def lip_to_hom(f: LipMap, mode: str = "exp0") -> MaxHomTree:
    """Inverse of :func:`hom_to_lip` (``mode="exp0"``) and of
    :func:`hom_to_lip_c1` (``mode="expMinus1"``)."""
    if mode not in ("exp0", "expMinus1"):
        raise UsageError(f"unknown mode {mode!r}")
    if not f.space.is_binary:
        raise UsageError("lip_to_hom needs a binary space")
    bound = 0 if mode == "exp0" else -1
    actual = lip_exponent(f.table)
    if actual > bound:
        raise ContractError(f"map exponent {_fmt_exp(actual)} exceeds {bound}")
    d = f.depth
    choices: dict[tuple, int] = {}
    for x, y in f.table.items():
        z = interleave(x, y) if mode == "exp0" else interleave(y, x)
        for k in range(d):
            L = 2 * k + 1 if mode == "exp0" else 2 * k
            node, digit = z[:L], z[L]
            if choices.setdefault(node, digit) != digit:
                raise ContractError(f"inconsistent choice at node {node!r}")
    return MaxHomTree(2 * d, 0 if mode == "exp0" else 1, tuple(sorted(choices.items())))


def tree_to_oriented(H: MaxHomTree) -> tuple[LipMap, str]:
    """Colour-0 trees become graphs, colour-1 trees inverses."""
    return (hom_to_lip(H), GRAPH) if H.color == 0 else (hom_to_lip_c1(H), INVERSE)


# -- halving / doubling the slope ------------------------------------------


def halve_transform(f: LipMap, i: int) -> tuple[LipMap, LipMap]:
    """``(f_up, f_down)``.

    ``f_up`` reads ``x = i a`` as ``f(a PAD)`` and is the constant
    ``f(1-i, ..., 1-i)`` off that cylinder (exponent + 1); ``f_down`` is
    ``i`` prepended to ``f(x)``, truncated to the depth (exponent - 1).
    """
    if i not in (0, 1):
        raise UsageError("i must be 0 or 1")
    d = f.depth
    if d < 2:
        raise UsageError("halve_transform needs depth >= 2")
    far = f((1 - i,) * d)

    def up(x):
        return f(x[1:] + (PAD_DIGIT,)) if x[0] == i else far

    def down(x):
        return ((i,) + f(x))[:d]

    e = f.exponent
    return (LipMap.from_function(f.space, up, e + 1),
            LipMap.from_function(f.space, down, e - 1))


# -- covering the square ----------------------------------------------------


def covers_cell(f: LipMap, orientation: str, x, y) -> bool:
    if orientation == GRAPH:
        return f(x) == y
    if orientation == INVERSE:
        return f(y) == x
    raise UsageError(f"unknown orientation {orientation!r}")


def covers_square(F: Sequence[tuple[LipMap, str]], space: TruncatedSpace) -> list[tuple]:
    """Ordered pairs ``(x, y)`` that no member covers; empty means covered."""
    for f, _ in F:
        if f.space != space:
            raise UsageError(f"{f!r} is not a map of {format_space(space)}")
    pts = enumerate_points(space)
    return [(x, y) for x in pts for y in pts
            if not any(covers_cell(f, o, x, y) for f, o in F)]


@dataclass
class LipCover:
    a_exp: int
    b_exp: int
    depth: int
    family: list = field(default_factory=list)  # [(LipMap, orientation)]

    @property
    def k(self) -> int:
        return len(self.family)

    def verify(self) -> bool:
        space = TruncatedSpace.binary(self.depth)
        for f, o in self.family:
            bound = self.a_exp if o == GRAPH else self.b_exp
            if f.space != space or lip_exponent(f.table) > bound:
                return False
        return not covers_square(self.family, space)

    def to_json(self) -> dict:
        sp = TruncatedSpace.binary(self.depth)
        return {
            "kind": "covlip", "space": format_space(sp), "a_exp": self.a_exp, "b_exp": self.b_exp,
            "k": self.k,
            "sets": [{"orientation": o, "exponent": _fmt_exp(lip_exponent(f.table)),
                      "map": [[format_point(x, sp), format_point(y, sp)] for x, y in sorted(f.table.items())]}
                     for f, o in self.family],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LipCover":
        sp = parse_space(doc["space"])
        fam = []
        for s in doc["sets"]:
            table = {parse_point(x, sp): parse_point(y, sp) for x, y in s["map"]}
            fam.append((LipMap(sp, table, check=False), s["orientation"]))
        cover = cls(int(doc["a_exp"]), int(doc["b_exp"]), sp.depth, fam)
        if int(doc.get("k", len(fam))) != len(fam):
            raise UsageError("certificate 'k' disagrees with its number of maps")
        return cover


def cov_lip_exact(a_exp: int, b_exp: int, d: int, cap: int = DEFAULT_CANDIDATE_CAP,
                  max_depth: int = DEFAULT_MAX_DEPTH) -> tuple[int, LipCover]:
    """Least number of graphs of exponent-``a_exp`` maps plus inverses of
    exponent-``b_exp`` maps covering the depth-``d`` square.

    Candidates are all admissible maps (every graph has exactly ``2**d``
    cells, so none is dominated).  Iterative deepening on ``k`` from the
    trivial bound ``2**d``; each level is a depth-first search branching on
    the first uncovered cell.
    """
    if d > max_depth:
        raise ResourceError(f"depth {d} exceeds the exact-solver limit {max_depth}")
    space = TruncatedSpace.binary(d)
    pts = enumerate_points(space)
    N = len(pts)
    pos = {p: i for i, p in enumerate(pts)}
    if count_lip_maps(d, a_exp) + count_lip_maps(d, b_exp) > cap:
        raise ResourceError("too many candidate maps for the exact solver")

    masks: list[int] = []
    members: list[tuple[tuple, str]] = []
    seen = set()
    for orient, e in ((GRAPH, a_exp), (INVERSE, b_exp)):
        for vals in enumerate_lip_tables(d, e, cap):
            m = 0
            for xi, v in enumerate(vals):
                cell = xi * N + pos[v] if orient == GRAPH else pos[v] * N + xi
                m |= 1 << cell
            if m not in seen:
                seen.add(m)
                masks.append(m)
                members.append((vals, orient))

    full = (1 << (N * N)) - 1
    by_cell: list[list[int]] = [[] for _ in range(N * N)]
    for ci, m in enumerate(masks):
        for cell in range(N * N):
            if m >> cell & 1:
                by_cell[cell].append(ci)

    def dfs(covered, chosen, k):
        rem = full & ~covered
        if not rem:
            return True
        if (k - len(chosen)) * N < rem.bit_count():
            return False
        cell = (rem & -rem).bit_length() - 1
        for ci in by_cell[cell]:
            chosen.append(ci)
            if dfs(covered | masks[ci], chosen, k):
                return True
            chosen.pop()
        return False

    k = N
    while True:
        chosen: list[int] = []
        if dfs(0, chosen, k):
            break
        k += 1
    fam = []
    for ci in chosen:
        vals, orient = members[ci]
        fam.append((LipMap(space, dict(zip(pts, vals))), orient))
    cover = LipCover(a_exp, b_exp, d, fam)
    if not cover.verify():
        raise AssertionError("cov_lip_exact produced an invalid cover")
    return k, cover


# -- the diagonal obstruction ----------------------------------------------


@dataclass
class DiagonalBound:
    """Maps of negative exponent fix at most one point, so the diagonal
    of the depth-``d`` square needs ``2**d`` of them."""

    exponent: int
    depth: int
    lower_bound: int
    census: list  # fixed-point count per supplied map
    covers_diagonal: bool | None
    exhaustive_max_fixed: int | None  # over all admissible maps, if enumerated

    @property
    def holds(self) -> bool:
        ok = all(n <= 1 for n in self.census)
        return ok and (self.exhaustive_max_fixed is None or self.exhaustive_max_fixed <= 1)


def diagonal_lower_bound(exp: int, d: int, family: Iterable[LipMap] = (),
                         cap: int = DEFAULT_CANDIDATE_CAP) -> DiagonalBound:
    if exp >= 0:
        raise UsageError("the diagonal obstruction needs a negative exponent")
    family = list(family)
    for f in family:
        if lip_exponent(f.table) > exp:
            raise ContractError(f"{f!r} exceeds exponent {exp}")
    census = [len(f.fixed_points()) for f in family]
    covers = None
    if family:
        fixed = set().union(*(f.fixed_points() for f in family))
        covers = len(fixed) == 1 << d
    exhaustive = None
    if count_lip_maps(d, exp) <= cap:
        pts = enumerate_points(TruncatedSpace.binary(d))
        exhaustive = max(sum(x == v for x, v in zip(pts, vals))
                         for vals in enumerate_lip_tables(d, exp, cap))
    return DiagonalBound(exp, d, 1 << d, census, covers, exhaustive)


# -- extension from a closed set -------------------------------------------


def _common_prefix(x, y) -> int:
    n = delta(x, y)
    return len(x) if n is None else n


def retraction(C: Iterable, x):
    """Lexicographically least member of ``C`` among those sharing the
    longest prefix with ``x``."""
    return min(C, key=lambda c: (-_common_prefix(x, c), c))


def extend_from_closed(partial: Mapping, space: TruncatedSpace) -> LipMap:
    """Extend ``partial`` (defined on ``C``) to ``f o r`` with ``r`` the
    nearest-point retraction onto ``C``."""
    if not partial:
        raise UsageError("cannot extend a map from the empty set")
    partial = {space.check(x): space.check(v) for x, v in partial.items()}
    C = sorted(partial)
    return LipMap.from_function(space, lambda x: partial[retraction(C, x)])
