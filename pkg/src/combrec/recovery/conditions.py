"""Sufficient conditions for unique recovery from an erased spectrum.

Every check is a strict inequality ``left < right``.  Variants whose two
sides are rational (given float inputs, which are themselves rationals) are
evaluated in exact :class:`~fractions.Fraction` arithmetic, so boundary
cases such as ``|E| |S| = N^d / 2`` fail as they should.  Variants with a
fractional power ``1/p`` or an irrational restriction constant fall back to
floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..comb import DiracComb, effective_triple
from ..lattice import Grid

CLASSICAL = "classical"
COMB_L2 = "comb-l2"
COMB_RESTRICTION = "comb-restriction"
DRA_L2 = "dra-l2"
DRA_L1 = "dra-l1"
DRA_RESTRICTION = "dra-restriction"
THEOREMS = (CLASSICAL, COMB_L2, COMB_RESTRICTION, DRA_L2, DRA_L1, DRA_RESTRICTION)

# p whose effective support each variant is stated for; None = from the estimate
VARIANT_P = {
    CLASSICAL: None,
    COMB_L2: 2.0,
    COMB_RESTRICTION: None,
    DRA_L2: 2.0,
    DRA_L1: 1.0,
    DRA_RESTRICTION: None,
}


@dataclass(frozen=True)
class ConditionReport:
    theorem: str
    inputs: dict
    left: float
    right: float
    holds: bool
    advisory: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def clean(v):
            if isinstance(v, Fraction):
                v = float(v)
            if isinstance(v, float) and math.isinf(v):
                return "inf"
            return v

        return {
            "theorem": self.theorem,
            "inputs": {k: clean(v) for k, v in self.inputs.items()},
            "left": clean(self.left),
            "right": clean(self.right),
            "holds": self.holds,
            "advisory": {k: clean(v) for k, v in self.advisory.items()},
        }


def _report(theorem, inputs, left, right, advisory=None) -> ConditionReport:
    holds = bool(left < right)
    return ConditionReport(theorem, inputs, float(left), float(right), holds, advisory or {})


def _ratio(delta: float, M: float) -> Fraction:
    if not (delta > 0 and M > 0):
        raise ValueError(f"need delta, M > 0, got delta={delta}, M={M}")
    return Fraction(delta) / Fraction(M)


def check_classical(E_size: int, S_size: int, grid: Grid) -> ConditionReport:
    """``|E| |S| < N^d / 2``."""
    left = Fraction(E_size * S_size)
    right = Fraction(grid.size, 2)
    inputs = {"E_size": E_size, "S_size": S_size, "N": grid.N, "d": grid.d}
    return _report(CLASSICAL, inputs, left, right)


def _constant(restriction, p, S_size):
    if restriction is None:
        if S_size == 0:
            return None
        raise ValueError("this variant needs a restriction estimate for the erased set")
    if p is not None and not math.isclose(restriction.p, p):
        raise ValueError(f"restriction estimate is for p={restriction.p}, not p={p}")
    return float(restriction.C)


def check_comb_recovery(
    A1_size: int,
    S_size: int,
    grid: Grid,
    gamma: int,
    delta: float,
    M: float,
    p: float = 2.0,
    variant: str = "l2",
    restriction=None,
) -> ConditionReport:
    """Recovery condition for combs with known p-effective mass.

    ``variant="l2"`` (p = 2)::

        |A_1| |S| < N^d / (4 (gamma^2 + 2 gamma)) (delta / M)^2

    ``variant="restriction"`` with a ``(p, q)`` estimate for ``S``::

        |A_1|^{1/p} |S| < N^d / (2 C (gamma^2 + 2 gamma)^{1/p}) (delta / M)

    The advisory entries are the ranges of ``gamma`` and ``delta / M`` in
    which the right-hand side is at least 1; they are reported, not enforced.
    """
    n = grid.size
    g2 = gamma * gamma + 2 * gamma
    ratio = _ratio(delta, M)
    inputs = {"A1_size": A1_size, "S_size": S_size, "N": grid.N, "d": grid.d,
              "gamma": gamma, "delta": delta, "M": M, "p": p, "C": None}
    if variant == "l2":
        if p != 2:
            raise ValueError("the l2 variant is stated for p = 2")
        left = Fraction(A1_size * S_size)
        right = Fraction(n, 4 * g2) * ratio**2
        advisory = {
            "gamma_max": math.sqrt(n / 4 * float(ratio) ** 2 + 1) - 1,
            "delta_over_M_min": (n / 12) ** -0.5,
        }
        return _report(COMB_L2, inputs, left, right, advisory)
    if variant == "restriction":
        p = float(restriction.p) if restriction is not None else float(p)
        C = _constant(restriction, p, S_size)
        inputs.update(p=p, C=C)
        if C is None:
            return _report(COMB_RESTRICTION, inputs, 0, math.inf)
        if p == 1:
            left = Fraction(A1_size * S_size)
            right = Fraction(n) / (2 * Fraction(C) * g2) * ratio
        else:
            left = A1_size ** (1 / p) * S_size
            right = n / (2 * C * g2 ** (1 / p)) * float(ratio)
        advisory = {
            "gamma_max": math.sqrt((n / (2 * C) * float(ratio)) ** p + 1) - 1,
            "delta_over_M_min": 2 * C * 3 ** (1 / p) / n,
        }
        return _report(COMB_RESTRICTION, inputs, left, right, advisory)
    raise ValueError(f"unknown variant {variant!r}; expected 'l2' or 'restriction'")


def check_dra(
    A1_size: int,
    S_size: int,
    grid: Grid,
    gamma: int,
    delta: float,
    M: float,
    variant: str = "l1",
    p: float | None = None,
    restriction=None,
) -> ConditionReport:
    """Condition under which rounding the observed part recovers the comb.

    ``l2`` (2-effective support): ``|A_1| |S| < N^d / (4 gamma) (delta/M)^2``;
    ``l1`` (1-effective support): ``|A_1| |S| < N^d / (2 gamma) (delta/M)``;
    ``restriction`` (p-effective support, ``(p, q)`` estimate for ``S``):
    ``|A_1|^{1/p} |S| < N^d / (2 C gamma^{1/p}) (delta/M)``.
    """
    n = grid.size
    ratio = _ratio(delta, M)
    inputs = {"A1_size": A1_size, "S_size": S_size, "N": grid.N, "d": grid.d,
              "gamma": gamma, "delta": delta, "M": M, "p": p, "C": None}
    if variant == "l2":
        inputs["p"] = 2.0
        left = Fraction(A1_size * S_size)
        right = Fraction(n, 4 * gamma) * ratio**2
        return _report(DRA_L2, inputs, left, right)
    if variant == "l1":
        inputs["p"] = 1.0
        left = Fraction(A1_size * S_size)
        right = Fraction(n, 2 * gamma) * ratio
        return _report(DRA_L1, inputs, left, right)
    if variant == "restriction":
        p = float(restriction.p) if restriction is not None else float(p if p is not None else 1)
        C = _constant(restriction, p, S_size)
        inputs.update(p=p, C=C)
        if C is None:
            return _report(DRA_RESTRICTION, inputs, 0, math.inf)
        if p == 1:
            left = Fraction(A1_size * S_size)
            right = Fraction(n) / (2 * Fraction(C) * gamma) * ratio
        else:
            left = A1_size ** (1 / p) * S_size
            right = n / (2 * C * gamma ** (1 / p)) * float(ratio)
        return _report(DRA_RESTRICTION, inputs, left, right)
    raise ValueError(f"unknown variant {variant!r}; expected 'l2', 'l1' or 'restriction'")


def condition_for(
    c: DiracComb, S_size: int, theorem: str, restriction=None, p: float | None = None
) -> ConditionReport:
    """Evaluate ``theorem`` for comb ``c``, picking the matching effective support.

    ``delta`` and ``M`` come from the comb's coefficient set.  For the
    classical condition ``|E|`` is the full support of ``c``.
    """
    if theorem == CLASSICAL:
        return check_classical(len(c.support), S_size, c.grid)
    want_p = VARIANT_P[theorem]
    if want_p is None:
        want_p = float(restriction.p) if restriction is not None else float(p or 1)
    A1 = len(effective_triple(c, want_p).support)
    args = (A1, S_size, c.grid, c.gamma, c.delta, c.M)
    if theorem == COMB_L2:
        return check_comb_recovery(*args, p=2.0, variant="l2")
    if theorem == COMB_RESTRICTION:
        return check_comb_recovery(*args, p=want_p, variant="restriction", restriction=restriction)
    if theorem == DRA_L2:
        return check_dra(*args, variant="l2")
    if theorem == DRA_L1:
        return check_dra(*args, variant="l1")
    if theorem == DRA_RESTRICTION:
        return check_dra(*args, variant="restriction", p=want_p, restriction=restriction)
    raise ValueError(f"unknown theorem {theorem!r}")
