"""Truncated sequence spaces with the first-difference ultrametric.

A point is a plain ``tuple`` of digits whose length equals the depth of
its space.  Spaces only validate; every operation is a pure function on
tuples, so points are cheap to hash and compare (tuple order is the
lexicographic order used throughout the package).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParseError, ResourceError, UsageError

Point = tuple  # tuple[int, ...]

DEFAULT_ENUM_CAP = 10**6


@dataclass(frozen=True)
class BranchingProfile:
    """Arity per level.  ``kind`` is ``binary``, ``factorial`` or ``custom``."""

    kind: str
    arities: tuple = ()

    def __post_init__(self):
        if self.kind not in ("binary", "factorial", "custom"):
            raise UsageError(f"unknown profile kind {self.kind!r}")
        if self.kind == "custom":
            if any(int(a) < 1 for a in self.arities):
                raise UsageError("custom arities must be >= 1")

    @classmethod
    def binary(cls):
        return cls("binary")

    @classmethod
    def factorial(cls):
        return cls("factorial")

    @classmethod
    def custom(cls, arities: Iterable[int]):
        return cls("custom", tuple(int(a) for a in arities))

    def arity_at(self, level: int) -> int:
        if level < 0:
            raise UsageError(f"negative level {level}")
        if self.kind == "binary":
            return 2
        if self.kind == "factorial":
            return level + 1
        if level >= len(self.arities):
            raise UsageError(f"custom profile undefined at level {level}")
        return self.arities[level]


@dataclass(frozen=True)
class TruncatedSpace:
    depth: int
    profile: BranchingProfile

    def __post_init__(self):
        if self.depth < 1:
            raise UsageError(f"depth must be >= 1, got {self.depth}")
        if self.profile.kind == "custom" and len(self.profile.arities) < self.depth:
            raise UsageError("custom profile shorter than depth")

    @classmethod
    def binary(cls, depth: int) -> "TruncatedSpace":
        return cls(depth, BranchingProfile.binary())

    @classmethod
    def factorial(cls, depth: int) -> "TruncatedSpace":
        return cls(depth, BranchingProfile.factorial())

    @classmethod
    def custom(cls, arities: Sequence[int]) -> "TruncatedSpace":
        return cls(len(arities), BranchingProfile.custom(arities))

    @property
    def arities(self) -> tuple:
        return tuple(self.profile.arity_at(l) for l in range(self.depth))

    @property
    def is_binary(self) -> bool:
        return all(a == 2 for a in self.arities)

    def size(self) -> int:
        return math.prod(self.arities)

    def contains(self, x) -> bool:
        if len(x) != self.depth:
            return False
        return all(0 <= d < a for d, a in zip(x, self.arities))

    def check(self, x) -> Point:
        """Return ``x`` as a tuple, raising :class:`UsageError` if it is not a point."""
        x = tuple(x)
        if not self.contains(x):
            raise UsageError(f"{x!r} is not a point of {self}")
        return x

    def __str__(self):
        return format_space(self)


# -- Delta and friends ------------------------------------------------------


def _same_length(x, y):
    if len(x) != len(y):
        raise UsageError(f"points from different spaces: {x!r} vs {y!r}")


def delta(x: Sequence[int], y: Sequence[int]) -> int | None:
    """First index where ``x`` and ``y`` differ, ``None`` when equal."""
    _same_length(x, y)
    for i, (a, b) in enumerate(zip(x, y)):
        if a != b:
            return i
    return None


def dist(x: Sequence[int], y: Sequence[int]) -> Fraction:
    n = delta(x, y)
    if n is None:
        return Fraction(0)
    return Fraction(1, 1 << n)


def parity(x: Sequence[int], y: Sequence[int]) -> int:
    n = delta(x, y)
    if n is None:
        raise UsageError("parity is undefined on a pair of equal points")
    return n & 1


# -- interleaving -----------------------------------------------------------


def doubled_space(space: TruncatedSpace) -> TruncatedSpace:
    """Space of ``interleave(x, y)``: each source arity appears twice."""
    return TruncatedSpace.custom([a for a in space.arities for _ in (0, 1)])


def interleave(x: Sequence[int], y: Sequence[int]) -> Point:
    _same_length(x, y)
    out = []
    for a, b in zip(x, y):
        out.append(a)
        out.append(b)
    return tuple(out)


def deinterleave(z: Sequence[int]) -> tuple[Point, Point]:
    if len(z) % 2:
        raise UsageError(f"cannot deinterleave odd-length point {tuple(z)!r}")
    z = tuple(z)
    return z[0::2], z[1::2]


# -- enumeration ------------------------------------------------------------


def enumerate_points(space: TruncatedSpace, cap: int = DEFAULT_ENUM_CAP) -> list[Point]:
    n = space.size()
    if n > cap:
        raise ResourceError(f"{space} has {n} points, cap is {cap}")
    return list(itertools.product(*(range(a) for a in space.arities)))


def cylinder(space: TruncatedSpace, stem: Sequence[int], cap: int = DEFAULT_ENUM_CAP) -> list[Point]:
    """All points extending ``stem``, in lexicographic order."""
    stem = tuple(stem)
    if len(stem) > space.depth:
        raise UsageError(f"stem {stem!r} longer than depth {space.depth}")
    arities = space.arities
    for l, d in enumerate(stem):
        if not 0 <= d < arities[l]:
            raise UsageError(f"stem digit {d} at level {l} out of range")
    rest = arities[len(stem):]
    if math.prod(rest) > cap:
        raise ResourceError(f"cylinder has {math.prod(rest)} points, cap is {cap}")
    return [stem + tail for tail in itertools.product(*(range(a) for a in rest))]


# -- text forms -------------------------------------------------------------


def format_point(x: Sequence[int], space: TruncatedSpace | None = None) -> str:
    if space is not None:
        short = max(space.arities) <= 10
    else:
        short = all(d < 10 for d in x)
    if short:
        return "".join(str(d) for d in x)
    return ",".join(str(d) for d in x)


def parse_point(text: str, space: TruncatedSpace | None = None) -> Point:
    text = text.strip()
    try:
        if "," in text:
            x = tuple(int(t) for t in text.split(","))
        else:
            x = tuple(int(c) for c in text)
    except ValueError:
        raise UsageError(f"bad point {text!r}") from None
    if space is not None:
        space.check(x)
    return x


def format_space(space: TruncatedSpace) -> str:
    kind = space.profile.kind
    if kind == "custom":
        return "custom:" + ",".join(str(a) for a in space.arities)
    return f"{kind}:{space.depth}"


def parse_space(text: str) -> TruncatedSpace:
    kind, sep, arg = text.strip().partition(":")
    if not sep:
        raise ParseError(f"bad space spec {text!r}")
    try:
        if kind == "binary":
            return TruncatedSpace.binary(int(arg))
        if kind == "factorial":
            return TruncatedSpace.factorial(int(arg))
        if kind == "custom":
            return TruncatedSpace.custom([int(a) for a in arg.split(",")])
    except ValueError:
        raise ParseError(f"bad space spec {text!r}") from None
    raise ParseError(f"unknown space kind {kind!r}")
