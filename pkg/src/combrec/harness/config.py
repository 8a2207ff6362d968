"""Experiment configuration for recovery sweeps."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..lattice import DEFAULT_GRID_CAP, Grid
from ..recovery.conditions import THEOREMS
from ..recovery.oracle import enumeration_cap
from ..recovery.support_search import DEFAULT_SUPPORT_CAP

ALGORITHMS = ("dra", "ls", "oracle")
ERASURE_MODELS = ("random", "progression", "explicit")


@dataclass(frozen=True)
class Caps:
    grid: int = DEFAULT_GRID_CAP
    support: int = DEFAULT_SUPPORT_CAP
    enumeration: int = field(default_factory=enumeration_cap)

    def __post_init__(self):
        for name in ("grid", "support", "enumeration"):
            if not getattr(self, name) > 0:
                raise ValueError(f"cap {name!r} must be positive")


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a comb family, an erasure model, and the checks to run.

    ``trials`` is the number of trials per erasure size (or per explicit
    set).  Trial ``t`` draws from ``numpy.random.default_rng([seed, t])``.
    """

    N: int
    d: int = 1
    coefficients: tuple = (0, 1)
    gamma: int = 1
    part_sizes: tuple | None = None
    erasure_model: str = "random"
    sizes: tuple = (1,)
    start: int = 0
    step: int = 1
    sets: tuple = ()
    variants: tuple = ("dra-l1",)
    p: float = 1.0
    algorithm: str = "dra"
    trials: int = 1
    seed: int | None = 0
    workers: int = 1
    record_timings: bool = False
    caps: Caps = field(default_factory=Caps)
    outputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.erasure_model not in ERASURE_MODELS:
            raise ValueError(f"erasure model must be one of {ERASURE_MODELS}")
        for v in self.variants:
            if v not in THEOREMS:
                raise ValueError(f"unknown variant {v!r}; choose from {THEOREMS}")
        if any(v.endswith("restriction") for v in self.variants) and self.p not in (1, 2):
            raise ValueError("restriction variants need p = 1 (C = 1) or p = 2 (exact C_2,2)")
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        if self.seed is None and self.trials > 0:
            raise ValueError("a seed is required for randomized sweeps")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.part_sizes is not None:
            for sizes in self.part_sizes:
                if len(sizes) != self.gamma:
                    raise ValueError(f"part sizes {sizes} do not have gamma={self.gamma} entries")

    @property
    def grid(self) -> Grid:
        return Grid(self.N, self.d, cap=self.caps.grid)

    @property
    def erasure_plan(self) -> list:
        """Sizes (random/progression) or coordinate lists (explicit)."""
        if self.erasure_model == "explicit":
            return [tuple(map(tuple, s)) for s in self.sets]
        return list(self.sizes)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        fam = data.get("family", {})
        era = data.get("erasure", {})
        caps = Caps(**data["caps"]) if "caps" in data else Caps()
        coeffs = tuple(complex(*c) if isinstance(c, (list, tuple)) else c
                       for c in fam.get("coefficients", (0, 1)))
        part_sizes = fam.get("part_sizes")
        return cls(
            N=int(data["N"]),
            d=int(data.get("d", 1)),
            coefficients=coeffs,
            gamma=int(fam.get("gamma", 1)),
            part_sizes=None if part_sizes is None else tuple(tuple(s) for s in part_sizes),
            erasure_model=era.get("model", "random"),
            sizes=tuple(era.get("sizes", (1,))),
            start=int(era.get("start", 0)),
            step=int(era.get("step", 1)),
            sets=tuple(tuple(tuple(c) if isinstance(c, list) else (c,) for c in s)
                       for s in era.get("sets", ())),
            variants=tuple(data.get("variants", ("dra-l1",))),
            p=float(data.get("p", 1.0)),
            algorithm=data.get("algorithm", "dra"),
            trials=int(data.get("trials", 1)),
            seed=data.get("seed", 0),
            workers=int(data.get("workers", 1)),
            record_timings=bool(data.get("record_timings", False)),
            caps=caps,
            outputs=dict(data.get("outputs", {})),
        )

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))
