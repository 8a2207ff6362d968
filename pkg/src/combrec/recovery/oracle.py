"""Brute-force uniqueness oracle.

Enumerates every assignment of alphabet values to grid points, keeps those
inside the comb family, and returns the ones whose spectrum agrees with the
observation off the erased set.  It transforms with ``numpy.fft`` and builds
candidates directly from value tables, so it shares no code with the
recovery algorithms it is used to check.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..comb import CoefficientSet, build_comb, effective_triple
from ..errors import CapExceededError
from ..lattice import Grid, LatticeSet
from .channel import ObservedSpectrum

DEFAULT_ENUM_CAP = 10**7
MATCH_TOL = 1e-9
MASS_RTOL = 1e-9
_CACHE_ENTRIES = 2**21
_CHUNK = 2**16


def enumeration_cap() -> int:
    """Global cap on enumerated candidates; ``COMBREC_CAP`` overrides it."""
    env = os.environ.get("COMBREC_CAP")
    return int(env) if env else DEFAULT_ENUM_CAP


@dataclass(frozen=True)
class CombFamily:
    """Combs over ``coefficients`` with at most ``max_gamma`` parts.

    With ``mass`` set, members must also have p-effective mass equal to
    ``mass`` within relative tolerance ``mass_rtol`` (for p = ``mass_p``).
    """

    coefficients: CoefficientSet
    max_gamma: int
    mass_p: float | None = None
    mass: float | None = None
    mass_rtol: float = MASS_RTOL

    def __post_init__(self):
        if (self.mass is None) != (self.mass_p is None):
            raise ValueError("mass and mass_p must be given together")


def _digits(codes: np.ndarray, base: int, n: int) -> np.ndarray:
    out = np.empty((codes.size, n), dtype=np.int64)
    rem = codes.copy()
    for j in range(n - 1, -1, -1):
        out[:, j] = rem % base
        rem //= base
    return out


def _spectra(values: np.ndarray, grid: Grid) -> np.ndarray:
    arr = values.reshape((values.shape[0],) + grid.shape)
    F = np.fft.fftn(arr, axes=tuple(range(1, grid.d + 1))) / grid.size
    return F.reshape(values.shape[0], -1)


def _chunk(grid: Grid, alphabet: tuple, start: int, stop: int):
    codes = np.arange(start, stop, dtype=np.int64)
    digits = _digits(codes, len(alphabet), grid.size)
    values = np.asarray(alphabet, dtype=np.complex128)[digits]
    counts = np.stack([np.count_nonzero(digits == k, axis=1) for k in range(len(alphabet))], axis=1)
    return digits, counts, _spectra(values, grid)


@lru_cache(maxsize=8)
def _cached_table(grid: Grid, alphabet: tuple):
    table = _chunk(grid, alphabet, 0, len(alphabet) ** grid.size)
    for arr in table:
        arr.setflags(write=False)
    return table


def _chunks(grid: Grid, alphabet: tuple):
    total = len(alphabet) ** grid.size
    if total * grid.size <= _CACHE_ENTRIES:
        yield _cached_table(grid, alphabet)
        return
    for start in range(0, total, _CHUNK):
        yield _chunk(grid, alphabet, start, min(total, start + _CHUNK))


def family_size(grid: Grid, family: CombFamily) -> int:
    return len(family.coefficients) ** grid.size


@dataclass(frozen=True)
class OracleResult:
    """Consistent combs plus the count of mass near-misses.

    ``near_boundary`` counts spectrum-consistent candidates whose mass is
    outside the ``mass_rtol`` window but within ``NEAR_MASS_RTOL`` of it;
    a nonzero count means the mass tolerance decided the outcome.
    """

    candidates: tuple
    near_boundary: int = 0


NEAR_MASS_RTOL = 1e-6


def oracle_search(
    obs: ObservedSpectrum, family: CombFamily, cap: int | None = None
) -> OracleResult:
    """Every comb in ``family`` whose spectrum matches ``obs`` off the erased set.

    Raises
    ------
    CapExceededError
        If the family has more than ``cap`` members (default: the global cap).
    """
    grid = obs.grid
    cap = enumeration_cap() if cap is None else cap
    total = family_size(grid, family)
    if total > cap:
        raise CapExceededError(f"{total} candidates exceed the enumeration cap of {cap}")
    alphabet = family.coefficients.values
    mags = np.abs(np.asarray(alphabet))
    nonzero = [k for k, a in enumerate(alphabet) if a != 0]
    zero = [k for k in range(len(alphabet)) if k not in nonzero]
    keep = obs.observed.indices
    target = obs.values
    found, near = [], 0
    for digits, counts, spectra in _chunks(grid, alphabet):
        gamma = np.count_nonzero(counts[:, nonzero] > 0, axis=1)
        ok = gamma <= family.max_gamma
        inside = ok
        if family.mass is not None:
            masses = (mags ** family.mass_p)[None, :] * counts
            masses[:, zero] = 0
            gap = np.abs(masses.max(axis=1) - family.mass)
            scale = max(abs(family.mass), 1e-300)
            inside = gap <= family.mass_rtol * scale
            # near misses go through the spectral test too, to be counted
            ok = ok & (gap <= NEAR_MASS_RTOL * scale)
        if keep.size:
            rows = np.flatnonzero(ok)
            err = np.max(np.abs(spectra[np.ix_(rows, keep)] - target[None, :]), axis=1)
            ok = np.zeros_like(ok)
            ok[rows[err <= MATCH_TOL]] = True
        near += int(np.count_nonzero(ok & ~inside))
        ok &= inside
        for r in np.flatnonzero(ok):
            parts = [
                (alphabet[k], LatticeSet(grid, np.flatnonzero(digits[r] == k).tolist()))
                for k in nonzero
            ]
            found.append(build_comb(grid, parts, family.coefficients))
    return OracleResult(tuple(found), near)


def brute_force_unique(
    obs: ObservedSpectrum, family: CombFamily, cap: int | None = None
) -> list:
    """List of the combs in ``family`` consistent with ``obs``; see :func:`oracle_search`."""
    return list(oracle_search(obs, family, cap).candidates)


def family_for(comb, p: float | None = 2.0, constrain_mass: bool = True) -> CombFamily:
    """The family a recovery theorem quantifies over for ``comb``.

    Same alphabet, complexity at most ``comb.gamma`` and, when requested,
    the same p-effective mass.
    """
    if constrain_mass and not comb.is_zero():
        eff = effective_triple(comb, p)
        return CombFamily(comb.coefficient_set, comb.gamma, float(p), eff.mass)
    return CombFamily(comb.coefficient_set, max(comb.gamma, 0))
