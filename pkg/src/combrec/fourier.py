"""Discrete Fourier transform on Z_N^d.

Normalization::

    F(m) = N^{-d} sum_x chi(-x.m) f(x),     f(x) = sum_m chi(x.m) F(m),

with ``chi(t) = exp(2 pi i t / N)``.  The ``N^{-d}`` factor sits on the
forward transform, so Plancherel reads ``sum |f|^2 = N^d sum |F|^2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError
from .lattice import Grid, LatticeSet

DEFAULT_SUPPORT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class _GridFunction:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != self.grid.size:
            raise DimensionError(
                f"{vals.size} values given for a grid of size {self.grid.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.grid.size

    def __getitem__(self, key):
        if isinstance(key, (int, np.integer)):
            return self.values[key]
        return self.values[self.grid.index(key)]

    def as_array(self) -> np.ndarray:
        """Values reshaped to ``(N,) * d``."""
        return self.values.reshape(self.grid.shape)

    def _check(self, other: "_GridFunction"):
        if other.grid != self.grid:
            raise DimensionError(f"{self.grid} vs {other.grid}")

    def __add__(self, other):
        self._check(other)
        return type(self)(self.grid, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        return type(self)(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {
            "N": self.grid.N,
            "d": self.grid.d,
            "values": [[float(z.real), float(z.imag)] for z in self.values],
        }

    @classmethod
    def from_json(cls, data: dict):
        grid = Grid(int(data["N"]), int(data.get("d", 1)))
        vals = [complex(*v) if isinstance(v, (list, tuple)) else complex(v)
                for v in data["values"]]
        return cls(grid, vals)


class Signal(_GridFunction):
    """A complex function on Z_N^d in the space domain."""


class Spectrum(_GridFunction):
    """A complex function on the frequency side of Z_N^d."""


def indicator(grid: Grid, support: LatticeSet, value: complex = 1.0) -> Signal:
    if support.grid != grid:
        raise DimensionError(f"{support.grid} vs {grid}")
    vals = np.zeros(grid.size, dtype=np.complex128)
    vals[support.indices] = value
    return Signal(grid, vals)


@lru_cache(maxsize=64)
def _roots(N: int) -> np.ndarray:
    """``chi(k)`` for k = 0..N-1; exponents are reduced before lookup."""
    r = np.exp(2j * np.pi * np.arange(N) / N)
    r.setflags(write=False)
    return r


@lru_cache(maxsize=32)
def _axis_matrix(N: int, sign: int) -> np.ndarray:
    k = np.arange(N)
    m = _roots(N)[(sign * np.outer(k, k)) % N]
    m.setflags(write=False)
    return m


def character_matrix(
    grid: Grid, rows=None, cols=None, sign: int = -1
) -> np.ndarray:
    """Matrix ``chi(sign * x.m)`` with rows indexed by m and columns by x.

    ``rows`` and ``cols`` are flat-index sequences (default: all points).
    ``sign=-1`` times ``N^{-d}`` is the forward transform.
    """
    c = grid.coord_array.astype(np.int64)
    r = c if rows is None else c[np.asarray(rows, dtype=np.int64)]
    x = c if cols is None else c[np.asarray(cols, dtype=np.int64)]
    dots = (r @ x.T) % grid.N
    return _roots(grid.N)[(sign * dots) % grid.N]


def dft_matrix(grid: Grid, rows=None, cols=None) -> np.ndarray:
    """Forward-transform matrix, optionally restricted to a submatrix."""
    return character_matrix(grid, rows, cols, sign=-1) / grid.size


def _apply_axes(arr: np.ndarray, mat: np.ndarray) -> np.ndarray:
    # the full N^d x N^d matrix is the Kronecker power of mat
    for axis in range(arr.ndim):
        arr = np.moveaxis(np.tensordot(mat, arr, axes=([1], [axis])), 0, axis)
    return arr


def forward_dft(f: Signal, method: str = "direct") -> Spectrum:
    """Return the spectrum of ``f``.

    ``method="direct"`` applies the character matrix one axis at a time;
    ``method="fft"`` uses ``numpy.fft.fftn``.  Both share the normalization.
    """
    grid = f.grid
    arr = f.as_array()
    if method == "direct":
        out = _apply_axes(arr, _axis_matrix(grid.N, -1)) / grid.size
    elif method == "fft":
        out = np.fft.fftn(arr) / grid.size
    else:
        raise ValueError(f"unknown method {method!r}")
    return Spectrum(grid, out.reshape(-1))


def inverse_dft(F: Spectrum, method: str = "direct") -> Signal:
    grid = F.grid
    arr = F.as_array()
    if method == "direct":
        out = _apply_axes(arr, _axis_matrix(grid.N, 1))
    elif method == "fft":
        out = np.fft.ifftn(arr) * grid.size
    else:
        raise ValueError(f"unknown method {method!r}")
    return Signal(grid, out.reshape(-1))


def plancherel_defect(f: Signal, method: str = "direct") -> float:
    """Relative gap between the two sides of the Plancherel identity."""
    F = forward_dft(f, method)
    lhs = float(np.sum(np.abs(f.values) ** 2))
    rhs = f.grid.size * float(np.sum(np.abs(F.values) ** 2))
    return abs(lhs - rhs) / max(1.0, lhs)


def frequency_limit(f: Signal, sigma: LatticeSet) -> Signal:
    """Project ``f`` onto signals whose spectrum lives in ``sigma``."""
    if sigma.grid != f.grid:
        raise DimensionError(f"{sigma.grid} vs {f.grid}")
    F = forward_dft(f).values.copy()
    F[~sigma.mask] = 0.0
    return inverse_dft(Spectrum(f.grid, F))


def spectrum_support(F: Spectrum, tol: float = DEFAULT_SUPPORT_TOL) -> LatticeSet:
    """Frequencies where ``|F(m)| > tol``."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return LatticeSet.from_mask(F.grid, np.abs(F.values) > tol)
