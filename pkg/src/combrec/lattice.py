"""Bookkeeping for the group Z_N^d.

Points are stored with reduced coordinates and every set iterates in
row-major order of its coordinates, which is also the order of the flat
index used by dense arrays elsewhere in the package.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionError, GridSizeError

DEFAULT_GRID_CAP = 2**20


@dataclass(frozen=True)
class Grid:
    """The ambient group Z_N^d.

    ``cap`` bounds N^d so that exhaustive searches stay finite; it does not
    take part in equality.
    """

    N: int
    d: int = 1
    cap: int = field(default=DEFAULT_GRID_CAP, compare=False, repr=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.N!r}")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.d!r}")
        if self.N**self.d > self.cap:
            raise GridSizeError(
                f"grid size {self.N}^{self.d} exceeds the cap of {self.cap}"
            )

    @property
    def size(self) -> int:
        return self.N**self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.d

    @cached_property
    def coord_array(self) -> np.ndarray:
        """All points as a ``(N^d, d)`` integer array in row-major order."""
        axes = np.indices(self.shape).reshape(self.d, -1).T
        axes.setflags(write=False)
        return axes

    def index(self, coords: Sequence[int]) -> int:
        coords = self._reduce(coords)
        return int(np.ravel_multi_index(coords, self.shape))

    def coords(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise IndexError(f"flat index {index} outside [0, {self.size})")
        return tuple(int(c) for c in np.unravel_index(index, self.shape))

    def point(self, *coords) -> "LatticePoint":
        if len(coords) == 1 and not isinstance(coords[0], (int, np.integer)):
            coords = tuple(coords[0])
        return LatticePoint(self, coords)

    def full(self) -> "LatticeSet":
        return LatticeSet.from_indices(self, range(self.size))

    def empty(self) -> "LatticeSet":
        return LatticeSet.from_indices(self, ())

    def subset(self, coords: Iterable) -> "LatticeSet":
        """Build a set from coordinate tuples (or bare ints when d = 1)."""
        return LatticeSet.from_coords(self, coords)

    def _reduce(self, coords) -> tuple[int, ...]:
        if isinstance(coords, (int, np.integer)):
            coords = (coords,)
        coords = tuple(int(c) % self.N for c in coords)
        if len(coords) != self.d:
            raise DimensionError(
                f"expected {self.d} coordinates, got {len(coords)}"
            )
        return coords


@dataclass(frozen=True)
class LatticePoint:
    grid: Grid
    coords: tuple[int, ...]

    def __post_init__(self):
        # negative inputs are legal; -x is needed for chi(-x.m)
        object.__setattr__(self, "coords", self.grid._reduce(self.coords))

    @property
    def index(self) -> int:
        return self.grid.index(self.coords)

    def _check(self, other: "LatticePoint"):
        if other.grid != self.grid:
            raise DimensionError(f"points on {self.grid} and {other.grid}")

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        self._check(other)
        return LatticePoint(
            self.grid, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(self.grid, tuple(-a for a in self.coords))

    def __sub__(self, other: "LatticePoint") -> "LatticePoint":
        return self + (-other)


def dot(x: LatticePoint, m: LatticePoint) -> int:
    """Return ``x_1 m_1 + ... + x_d m_d`` reduced mod N."""
    x._check(m)
    return sum(a * b for a, b in zip(x.coords, m.coords)) % x.grid.N


def dot_matrix(grid: Grid) -> np.ndarray:
    """``(N^d, N^d)`` table of ``x . m mod N`` indexed by flat indices."""
    c = grid.coord_array.astype(np.int64)
    return (c @ c.T) % grid.N


def enumerate_grid(grid: Grid) -> Iterator[LatticePoint]:
    """Yield every point once, in row-major order (last coordinate fastest)."""
    for coords in itertools.product(range(grid.N), repeat=grid.d):
        yield LatticePoint(grid, coords)


class LatticeSet:
    """An immutable subset of a grid, stored as sorted flat indices."""

    __slots__ = ("grid", "_idx")

    def __init__(self, grid: Grid, indices: Iterable[int] = ()):
        idx = sorted({int(i) for i in indices})
        if idx and (idx[0] < 0 or idx[-1] >= grid.size):
            raise IndexError("flat index outside the grid")
        self.grid = grid
        self._idx = tuple(idx)

    @classmethod
    def from_indices(cls, grid: Grid, indices: Iterable[int]) -> "LatticeSet":
        return cls(grid, indices)

    @classmethod
    def from_coords(cls, grid: Grid, coords: Iterable) -> "LatticeSet":
        return cls(grid, (grid.index(c) for c in coords))

    @classmethod
    def from_points(cls, grid: Grid, points: Iterable[LatticePoint]) -> "LatticeSet":
        idx = []
        for p in points:
            if p.grid != grid:
                raise DimensionError(f"point on {p.grid}, set on {grid}")
            idx.append(p.index)
        return cls(grid, idx)

    @classmethod
    def from_mask(cls, grid: Grid, mask: np.ndarray) -> "LatticeSet":
        mask = np.asarray(mask, dtype=bool).reshape(-1)
        if mask.size != grid.size:
            raise DimensionError(f"mask of length {mask.size} on grid of size {grid.size}")
        return cls(grid, np.flatnonzero(mask).tolist())

    @property
    def indices(self) -> np.ndarray:
        return np.array(self._idx, dtype=np.int64)

    @property
    def mask(self) -> np.ndarray:
        out = np.zeros(self.grid.size, dtype=bool)
        out[list(self._idx)] = True
        return out

    def coords(self) -> list[tuple[int, ...]]:
        return [self.grid.coords(i) for i in self._idx]

    def __len__(self) -> int:
        return len(self._idx)

    def __iter__(self) -> Iterator[LatticePoint]:
        for i in self._idx:
            yield LatticePoint(self.grid, self.grid.coords(i))

    def __contains__(self, item) -> bool:
        if isinstance(item, LatticePoint):
            return item.grid == self.grid and item.index in self._idx
        return self.grid.index(item) in self._idx

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeSet):
            return NotImplemented
        return self.grid == other.grid and self._idx == other._idx

    def __hash__(self) -> int:
        return hash((self.grid, self._idx))

    def __repr__(self) -> str:
        body = self.coords() if len(self) <= 16 else f"{len(self)} points"
        return f"LatticeSet(N={self.grid.N}, d={self.grid.d}, {body})"

    def _same(self, other: "LatticeSet"):
        if other.grid != self.grid:
            raise DimensionError(f"sets on {self.grid} and {other.grid}")

    def __or__(self, other: "LatticeSet") -> "LatticeSet":
        self._same(other)
        return LatticeSet(self.grid, set(self._idx) | set(other._idx))

    def __and__(self, other: "LatticeSet") -> "LatticeSet":
        self._same(other)
        return LatticeSet(self.grid, set(self._idx) & set(other._idx))

    def __sub__(self, other: "LatticeSet") -> "LatticeSet":
        self._same(other)
        return LatticeSet(self.grid, set(self._idx) - set(other._idx))

    def union(self, other):
        return self | other

    def intersection(self, other):
        return self & other

    def difference(self, other):
        return self - other

    def complement(self) -> "LatticeSet":
        return LatticeSet(self.grid, set(range(self.grid.size)) - set(self._idx))

    def isdisjoint(self, other: "LatticeSet") -> bool:
        self._same(other)
        return set(self._idx).isdisjoint(other._idx)

    def issubset(self, other: "LatticeSet") -> bool:
        self._same(other)
        return set(self._idx) <= set(other._idx)

    def translate(self, shift: Sequence[int] | LatticePoint) -> "LatticeSet":
        if isinstance(shift, LatticePoint):
            shift = shift.coords
        shift = np.asarray(self.grid._reduce(shift), dtype=np.int64)
        if not self._idx:
            return self
        moved = (self.grid.coord_array[list(self._idx)] + shift) % self.grid.N
        return LatticeSet(self.grid, np.ravel_multi_index(moved.T, self.grid.shape).tolist())

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.coords()]

    @classmethod
    def from_json(cls, grid: Grid, data) -> "LatticeSet":
        return cls.from_coords(grid, data)


def union(a: LatticeSet, b: LatticeSet) -> LatticeSet:
    return a | b


def intersection(a: LatticeSet, b: LatticeSet) -> LatticeSet:
    return a & b


def difference(a: LatticeSet, b: LatticeSet) -> LatticeSet:
    return a - b


def complement(a: LatticeSet) -> LatticeSet:
    return a.complement()
