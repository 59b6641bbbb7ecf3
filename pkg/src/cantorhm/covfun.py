"""Covering a finite square ``X x X`` by graphs of functions and their inverses.

``(x, y)`` is covered by ``f`` when ``f(x) == y`` or ``f(y) == x``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, ResourceError, UsageError

MAX_EXACT_N = 6
DEFAULT_CLOSURE_CAP = 10**5


@dataclass(frozen=True)
class FnFamily:
    n: int
    functions: tuple  # tuple of tuples, functions[j][x] = f_j(x)

    def __post_init__(self):
        for f in self.functions:
            if len(f) != self.n or any(not 0 <= v < self.n for v in f):
                raise UsageError(f"{f!r} is not a total function on 0..{self.n - 1}")

    @classmethod
    def of(cls, n: int, functions: Iterable[Sequence[int]]) -> "FnFamily":
        return cls(n, tuple(tuple(f) for f in functions))

    def __len__(self):
        return len(self.functions)

    def uncovered(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in range(self.n)
                if not any(f[x] == y or f[y] == x for f in self.functions)]

    def covers(self) -> bool:
        return not self.uncovered()

    def to_text(self) -> str:
        lines = [f"fnfam {self.n}"] + ["fn " + " ".join(map(str, f)) for f in self.functions]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FnFamily":
        n = None
        fns = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if n is None:
                    if parts[0] != "fnfam" or len(parts) != 2:
                        raise ParseError("expected 'fnfam <n>'", lineno)
                    n = int(parts[1])
                elif parts[0] == "fn":
                    f = tuple(int(v) for v in parts[1:])
                    if len(f) != n or any(not 0 <= v < n for v in f):
                        raise ParseError(f"'fn' row is not a function on 0..{n - 1}", lineno)
                    fns.append(f)
                else:
                    raise ParseError(f"unexpected line {line!r}", lineno)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        if n is None:
            raise ParseError("empty fnfam file")
        return cls(n, tuple(fns))


def surjection_cover(k: int) -> FnFamily:
    """``g_b(a) = s_a(b)`` with the surjections ``s_a(b) = min(b, a)`` of
    ``{0..k-1}`` onto ``{0..a}``."""
    if k < 1:
        raise UsageError("k must be >= 1")
    return FnFamily.of(k, [[min(b, a) for a in range(k)] for b in range(k)])


def class_lower_bound(n: int) -> int:
    """Each function covers at most ``n`` of the ``n(n+1)/2`` unordered classes."""
    if n == 0:
        return 0
    return -(-(n * (n + 1) // 2) // n)


def min_fn_cover(n: int, max_n: int = MAX_EXACT_N) -> tuple[int, FnFamily]:
    """Least number of functions on ``{0..n-1}`` covering the square.

    Each unordered class ``{x, y}`` must be realised by some slot
    ``f_j(x) = y`` or ``f_j(y) = x``.  Iterative deepening on ``k`` from the
    class-counting bound; classes are assigned in order to free slots,
    functions are opened in order (symmetry breaking) and the search is cut
    when fewer free slots remain than unassigned classes.
    """
    if n < 0:
        raise UsageError("n must be >= 0")
    if n > max_n:
        raise ResourceError(f"n = {n} exceeds the exact-solver limit {max_n}")
    if n == 0:
        return 0, FnFamily(0, ())
    classes = [(x, x) for x in range(n)] + [(x, y) for x in range(n) for y in range(x + 1, n)]

    def attempt(k):
        slots = [[None] * n for _ in range(k)]
        free = k * n

        def rec(ci, opened):
            nonlocal free
            if ci == len(classes):
                return True
            if free < len(classes) - ci:
                return False
            x, y = classes[ci]
            # already realised by an earlier assignment
            for j in range(opened):
                if slots[j][x] == y or slots[j][y] == x:
                    return rec(ci + 1, opened)
            for j in range(min(opened + 1, k)):
                for a, b in ((x, y), (y, x)) if x != y else ((x, x),):
                    if slots[j][a] is None:
                        slots[j][a] = b
                        free -= 1
                        if rec(ci + 1, max(opened, j + 1)):
                            return True
                        slots[j][a] = None
                        free += 1
            return False

        if not rec(0, 0):
            return None
        # unconstrained arguments go to themselves
        return [[x if s[x] is None else s[x] for x in range(n)] for s in slots]

    k = class_lower_bound(n)
    while True:
        fns = attempt(k)
        if fns is not None:
            fam = FnFamily.of(n, fns)
            assert fam.covers()
            return k, fam
        k += 1


def quasi_order(F: FnFamily, x: int, y: int) -> bool:
    """``x <=_F y``: some member sends ``y`` to ``x``."""
    return any(f[y] == x for f in F.functions)


def compose(f: Sequence[int], g: Sequence[int]) -> tuple:
    """``f o g``."""
    return tuple(f[v] for v in g)


def composition_closure(F: FnFamily, cap: int = DEFAULT_CLOSURE_CAP) -> FnFamily:
    """Least family containing ``F`` and the identity, closed under composition."""
    ident = tuple(range(F.n))
    gens = list(dict.fromkeys((ident,) + F.functions))
    seen = {g: None for g in gens}
    queue = deque(gens)
    while queue:
        h = queue.popleft()
        for g in gens:
            for c in (compose(g, h), compose(h, g)):
                if c not in seen:
                    seen[c] = None
                    if len(seen) > cap:
                        raise ResourceError(f"closure exceeds cap {cap}")
                    queue.append(c)
    return FnFamily(F.n, tuple(seen))


def is_linear_quasi_order(F: FnFamily) -> bool:
    n = F.n
    leq = [[quasi_order(F, x, y) for y in range(n)] for x in range(n)]
    for x in range(n):
        if not leq[x][x]:
            return False
        for y in range(n):
            if not (leq[x][y] or leq[y][x]):
                return False
            for z in range(n):
                if leq[x][y] and leq[y][z] and not leq[x][z]:
                    return False
    return True


def down_set(F: FnFamily, x: int) -> set:
    return {y for y in range(F.n) if quasi_order(F, y, x)}
