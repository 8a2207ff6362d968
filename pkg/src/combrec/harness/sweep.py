"""Deterministic recovery sweeps and their CSV/JSON records."""
from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from ..comb import CoefficientSet, effective_triple, random_comb, to_signal
from ..errors import CapExceededError
from ..lattice import LatticeSet
from ..recovery import (
    AMBIGUOUS,
    FAILED,
    RECOVERED,
    brute_force_unique,
    condition_for,
    dra_recover,
    family_for,
    ls_support_search,
    missing_part,
    progression_erasure,
    random_erasure,
    transmit,
)
from ..recovery.conditions import CLASSICAL, VARIANT_P
from ..restriction import exact_c22, trivial_c1q
from .config import ExperimentConfig

CSV_COLUMNS = (
    "trial", "N", "d", "gamma", "delta", "M", "p", "A1_size", "S_size",
    "variant", "condition_holds", "status", "max_II", "runtime_ms", "seed",
)
CAP_EXCEEDED = "cap-exceeded"


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    N: int
    d: int
    gamma: int
    delta: float
    M: float
    p: float | None
    A1_size: int
    S_size: int
    variant: str
    condition_holds: bool
    status: str
    max_II: float
    runtime_ms: float | None
    seed: int

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "TrialRecord":
        return cls(**{f.name: data[f.name] for f in fields(cls)})


def _trial_setup(cfg: ExperimentConfig, t: int):
    grid = cfg.grid
    rng = np.random.default_rng([int(cfg.seed), t])
    plan = cfg.erasure_plan
    slot = t // cfg.trials
    sizes = None
    if cfg.part_sizes:
        sizes = cfg.part_sizes[(t % cfg.trials) % len(cfg.part_sizes)]
    f = random_comb(grid, rng, cfg.gamma, CoefficientSet.from_values(cfg.coefficients), sizes)
    if cfg.erasure_model == "random":
        S = random_erasure(grid, plan[slot], rng)
    elif cfg.erasure_model == "progression":
        S = progression_erasure(grid, plan[slot], cfg.start, cfg.step)
    else:
        S = LatticeSet.from_coords(grid, plan[slot])
    return f, S


def _recover(cfg: ExperimentConfig, f, S):
    obs = transmit(f, S)
    if cfg.algorithm == "dra":
        out = dra_recover(obs, f.coefficient_set)
        return out.status, out.result
    if cfg.algorithm == "ls":
        out = ls_support_search(obs, len(f.support), cap=cfg.caps.support)
        return out.status, out.result
    found = brute_force_unique(obs, family_for(f, 2.0), cap=cfg.caps.enumeration)
    if len(found) == 1:
        return RECOVERED, found[0]
    return (AMBIGUOUS if found else FAILED), None


def _restriction(cfg: ExperimentConfig, S: LatticeSet):
    if len(S) == 0:
        return None
    return trivial_c1q(S, 2.0) if cfg.p == 1 else exact_c22(S)


def run_trial(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    """All records of trial ``t``; one per configured variant."""
    f, S = _trial_setup(cfg, t)
    t0 = time.perf_counter()
    try:
        status, result = _recover(cfg, f, S)
        if status == RECOVERED and result != f:
            # the recoverer was confident but wrong
            status = FAILED
    except CapExceededError:
        status = CAP_EXCEEDED
    elapsed = (time.perf_counter() - t0) * 1e3
    II = missing_part(to_signal(f), S)
    max_II = float(np.max(np.abs(II)))
    restriction = None
    if any(v.endswith("restriction") for v in cfg.variants):
        restriction = _restriction(cfg, S)
    records = []
    for variant in cfg.variants:
        report = condition_for(f, len(S), variant, restriction=restriction, p=cfg.p)
        p = VARIANT_P[variant]
        if variant.endswith("restriction"):
            p = float(cfg.p)
        A1 = len(f.support) if variant == CLASSICAL else len(effective_triple(f, p).support)
        records.append(TrialRecord(
            trial=t, N=cfg.N, d=cfg.d, gamma=f.gamma, delta=f.delta, M=f.M, p=p,
            A1_size=A1, S_size=len(S), variant=variant,
            condition_holds=report.holds, status=status, max_II=max_II,
            runtime_ms=elapsed if cfg.record_timings else None, seed=int(cfg.seed),
        ))
    return records


def run_sweep(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Run every trial; output is ordered by trial index for any worker count."""
    total = cfg.trials * len(cfg.erasure_plan)
    if total == 0:
        return []
    if cfg.workers == 1:
        batches = [run_trial(cfg, t) for t in range(total)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            batches = list(pool.map(lambda t: run_trial(cfg, t), range(total)))
    return [r for batch in batches for r in batch]


def summarize(records: list[TrialRecord]) -> dict:
    """Success rates per variant, split by whether the condition held."""
    out: dict = {}
    for r in records:
        row = out.setdefault(r.variant, {
            "held": {"trials": 0, "recovered": 0},
            "not_held": {"trials": 0, "recovered": 0},
        })
        bucket = row["held" if r.condition_holds else "not_held"]
        bucket["trials"] += 1
        bucket["recovered"] += r.status == RECOVERED
    for row in out.values():
        for bucket in row.values():
            n = bucket["trials"]
            bucket["success_rate"] = bucket["recovered"] / n if n else None
    return {"records": len(records), "variants": out}


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return str(v)


def records_to_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([_cell(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


_PARSERS = {
    "trial": int, "N": int, "d": int, "gamma": int, "A1_size": int, "S_size": int,
    "seed": int, "delta": float, "M": float, "p": float, "max_II": float,
    "runtime_ms": float, "variant": str, "status": str,
    "condition_holds": lambda s: s == "true",
}


def records_from_csv(text: str) -> list[TrialRecord]:
    rows = csv.DictReader(io.StringIO(text))
    out = []
    for row in rows:
        data = {k: (None if row[k] == "" else _PARSERS[k](row[k])) for k in CSV_COLUMNS}
        out.append(TrialRecord(**data))
    return out
