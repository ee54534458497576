"""Toral lattice bookkeeping.

Agents live on the m-dimensional discrete torus (Z/nZ)^m.  Everything else
in the package speaks in terms of flat agent indices, so this module owns
the two translations that must stay consistent everywhere:

* lexicographic enumeration of vertices (row-major / C order, coordinate 0
  slowest), matching ``numpy.reshape`` on an (n, ..., n) grid;
* canonical reduction of coordinates into [0, n).

Neighbor offset sets are stored reduced and sorted so that iteration order
is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError

Point = tuple[int, ...]


@dataclass(frozen=True)
class GroupParams:
    """Parameters (n, m) of the torus (Z/nZ)^m."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and isinstance(self.m, int)):
            raise ConfigError("n and m must be integers")
        if self.n < 2:
            raise ConfigError(f"need n >= 2, got n={self.n}")
        if self.m < 1:
            raise ConfigError(f"need m >= 1, got m={self.m}")

    @property
    def size(self) -> int:
        """Number of agents N = n^m."""
        return self.n ** self.m

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.m

    def reduce(self, point: Sequence[int]) -> Point:
        """Canonical representative with every coordinate in [0, n)."""
        if len(point) != self.m:
            raise ConfigError(f"point {tuple(point)} has {len(point)} coordinates, expected {self.m}")
        return tuple(int(c) % self.n for c in point)

    def index_of(self, point: Sequence[int]) -> int:
        """Flat lexicographic index of a (possibly unreduced) point."""
        idx = 0
        for c in self.reduce(point):
            idx = idx * self.n + c
        return idx

    def point_at(self, index: int) -> Point:
        if not 0 <= index < self.size:
            raise ConfigError(f"index {index} out of range for N={self.size}")
        coords = []
        for _ in range(self.m):
            coords.append(index % self.n)
            index //= self.n
        return tuple(reversed(coords))

    def vertices(self) -> np.ndarray:
        """All N vertices as an (N, m) int array in lexicographic order."""
        grids = np.meshgrid(*[np.arange(self.n)] * self.m, indexing="ij")
        return np.stack([a.ravel() for a in grids], axis=1)

    def indices_of(self, points: np.ndarray) -> np.ndarray:
        """Vectorized index_of for a (k, m) array of integer points."""
        pts = np.asarray(points, dtype=np.int64) % self.n
        weights = self.n ** np.arange(self.m - 1, -1, -1, dtype=np.int64)
        return pts @ weights


def inner_product(u: Sequence[int], v: Sequence[int], n: int) -> int:
    """<u, v> mod n, the pairing that drives every character sum here."""
    if len(u) != len(v):
        raise ConfigError("inner_product arguments must have equal length")
    return int(sum(int(a) * int(b) for a, b in zip(u, v)) % n)


@dataclass(frozen=True)
class ConvolutionSet:
    """A set of neighbor offsets C, reduced, distinct, sorted, nonzero.

    The averaging step mixes agent v with agents v + c for c in C, so the
    origin is rejected (self-weight is carried by p separately) and
    duplicates are rejected rather than silently merged: a repeated offset
    would change the intended uniform weights.
    """

    offsets: tuple[Point, ...]
    n: int

    def __post_init__(self) -> None:
        if len(self.offsets) == 0:
            raise ConfigError("neighbor set must be nonempty")
        ms = {len(c) for c in self.offsets}
        if len(ms) != 1:
            raise ConfigError("all offsets must share one dimension")
        reduced = [tuple(int(x) % self.n for x in c) for c in self.offsets]
        zero = (0,) * len(reduced[0])
        if zero in reduced:
            raise ConfigError("offset 0 is not allowed in the neighbor set")
        if len(set(reduced)) != len(reduced):
            raise ConfigError("neighbor set has duplicate offsets after reduction mod n")
        object.__setattr__(self, "offsets", tuple(sorted(reduced)))

    @property
    def m(self) -> int:
        return len(self.offsets[0])

    def __len__(self) -> int:
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)

    def array(self) -> np.ndarray:
        return np.asarray(self.offsets, dtype=np.int64)

    @classmethod
    def parse(cls, text: str, n: int) -> "ConvolutionSet":
        """Parse the CLI wire format ``(1,0);(0,1)``.

        Whitespace is tolerated; anything else malformed raises ConfigError.
        """
        chunks = [c for c in (s.strip() for s in text.split(";")) if c]
        if not chunks:
            raise ConfigError("empty neighbor set string")
        offsets = []
        for chunk in chunks:
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise ConfigError(f"bad offset {chunk!r}, expected e.g. (1,0)")
            body = chunk[1:-1]
            try:
                offsets.append(tuple(int(x.strip()) for x in body.split(",")))
            except ValueError as exc:
                raise ConfigError(f"bad offset {chunk!r}: {exc}") from None
        return cls(tuple(offsets), n)

    def to_string(self) -> str:
        return ";".join("(" + ",".join(str(x) for x in c) + ")" for c in self.offsets)


def group_params_for(conv: ConvolutionSet) -> GroupParams:
    return GroupParams(conv.n, conv.m)


def generated_subgroup(conv: ConvolutionSet, g: GroupParams) -> np.ndarray:
    """Flat indices of the subgroup of (Z/nZ)^m generated by the offsets.

    In a finite group the additive closure of the offsets already is a
    subgroup, so a BFS over repeated addition from 0 suffices.
    """
    if conv.m != g.m or conv.n != g.n:
        raise ConfigError("neighbor set and group parameters disagree")
    seen = {0}
    frontier = deque([(0,) * g.m])
    while frontier:
        v = frontier.popleft()
        for c in conv.offsets:
            w = tuple((a + b) % g.n for a, b in zip(v, c))
            i = 0
            for x in w:
                i = i * g.n + x
            if i not in seen:
                seen.add(i)
                frontier.append(w)
    return np.fromiter(sorted(seen), dtype=np.int64)


def spans(conv: ConvolutionSet, g: GroupParams) -> bool:
    """True when the offsets generate the whole torus.

    Required for consensus: otherwise the dynamics decouples into cosets
    and extra unit-modulus eigenvalues appear.
    """
    return len(generated_subgroup(conv, g)) == g.size


__all__ = [
    "Point",
    "GroupParams",
    "ConvolutionSet",
    "inner_product",
    "group_params_for",
    "generated_subgroup",
    "spans",
]
