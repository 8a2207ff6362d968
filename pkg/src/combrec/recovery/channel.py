"""Frequency-erasure channel and the outcome record shared by recoverers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..comb import DiracComb, to_signal
from ..errors import DimensionError, TotalErasureError
from ..fourier import Signal, Spectrum, forward_dft, inverse_dft
from ..lattice import Grid, LatticeSet

RECOVERED = "recovered"
AMBIGUOUS = "ambiguous"
FAILED = "failed"

CONSISTENCY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ObservedSpectrum:
    """A spectrum with the frequencies in ``erased`` removed.

    ``values`` holds the surviving frequencies in canonical order.
    """

    grid: Grid
    erased: LatticeSet
    values: np.ndarray

    def __post_init__(self):
        if self.erased.grid != self.grid:
            raise DimensionError(f"{self.erased.grid} vs {self.grid}")
        if len(self.erased) >= self.grid.size:
            raise TotalErasureError("every frequency is erased")
        vals = np.array(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != self.grid.size - len(self.erased):
            raise DimensionError("number of observed values does not match the erasure set")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def observed(self) -> LatticeSet:
        return self.erased.complement()

    def zero_filled(self) -> Spectrum:
        """The spectrum with erased frequencies set to 0."""
        full = np.zeros(self.grid.size, dtype=np.complex128)
        full[self.observed.indices] = self.values
        return Spectrum(self.grid, full)

    def mismatch(self, F: Spectrum) -> float:
        """Largest deviation of ``F`` from the observed values."""
        if F.grid != self.grid:
            raise DimensionError(f"{F.grid} vs {self.grid}")
        if self.values.size == 0:
            return 0.0
        return float(np.max(np.abs(F.values[self.observed.indices] - self.values)))

    def to_json(self) -> dict:
        return {
            "N": self.grid.N,
            "d": self.grid.d,
            "erased": self.erased.to_json(),
            "observed": [
                {"m": list(self.grid.coords(int(i))), "value": [float(z.real), float(z.imag)]}
                for i, z in zip(self.observed.indices, self.values)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ObservedSpectrum":
        grid = Grid(int(data["N"]), int(data.get("d", 1)))
        erased = LatticeSet.from_json(grid, data["erased"])
        by_index = {grid.index(o["m"]): complex(*o["value"]) for o in data["observed"]}
        expected = erased.complement().indices.tolist()
        if sorted(by_index) != expected:
            raise DimensionError("observed frequencies must be exactly the complement of 'erased'")
        return cls(grid, erased, [by_index[i] for i in expected])


def erase(F: Spectrum, S: LatticeSet) -> ObservedSpectrum:
    """Drop the frequencies in ``S`` from ``F``."""
    if S.grid != F.grid:
        raise DimensionError(f"{S.grid} vs {F.grid}")
    if len(S) >= F.grid.size:
        raise TotalErasureError("cannot erase every frequency")
    keep = S.complement().indices
    return ObservedSpectrum(F.grid, S, F.values[keep])


def transmit(f: Signal | DiracComb, S: LatticeSet) -> ObservedSpectrum:
    """Transform ``f`` and send it through the erasure channel."""
    if isinstance(f, DiracComb):
        f = to_signal(f)
    return erase(forward_dft(f), S)


def random_erasure(grid: Grid, size: int, rng: np.random.Generator) -> LatticeSet:
    """Uniform random subset of the given size, drawn without replacement."""
    return LatticeSet(grid, rng.choice(grid.size, size=size, replace=False).tolist())


def progression_erasure(grid: Grid, size: int, start: int = 0, step: int = 1) -> LatticeSet:
    """``{start, start + step, ...}`` modulo N^d in flat index space."""
    idx = [(start + j * step) % grid.size for j in range(size)]
    if len(set(idx)) != size:
        raise ValueError(f"progression with step {step} repeats before {size} terms")
    return LatticeSet(grid, idx)


def missing_part(f: Signal, S: LatticeSet) -> np.ndarray:
    """``II(x) = sum_{m in S} chi(x.m) F(m)``, the contribution lost to erasure."""
    F = forward_dft(f).values.copy()
    F[~S.mask] = 0.0
    return inverse_dft(Spectrum(f.grid, F)).values


@dataclass(frozen=True, eq=False)
class RecoveryOutcome:
    status: str
    result: DiracComb | None = None
    certificate: dict = field(default_factory=dict)

    @property
    def recovered(self) -> bool:
        return self.status == RECOVERED

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "result": None if self.result is None else self.result.to_json(),
            "certificate": _jsonable(self.certificate),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, DiracComb):
        return obj.to_json()
    if isinstance(obj, LatticeSet):
        return obj.to_json()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj
