"""Dirac combs ``f = sum_i a_i 1_{A_i}`` and their effective supports.

Combs are kept in normalized form: parts have pairwise distinct nonzero
coefficients and nonempty, pairwise disjoint supports.  Under that form the
ordering used to pick the p-effective support (mass descending, then
smaller support, then smaller principal argument) has no ties.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    DimensionError,
    DisjointnessError,
    MembershipError,
    NoEffectiveSupportError,
)
from .fourier import DEFAULT_SUPPORT_TOL, Signal, forward_dft, spectrum_support
from .lattice import Grid, LatticeSet


def principal_arg(z: complex) -> float:
    """Argument in ``[0, 2 pi)``; positive reals map to 0."""
    a = math.atan2(z.imag, z.real)
    if a < 0:
        a += 2 * math.pi
    # atan2 of a tiny negative imaginary part can round up to exactly 2 pi
    return 0.0 if a >= 2 * math.pi else a


def _check_p(p: float) -> float:
    p = float(p)
    if not (0 < p < math.inf):
        raise ValueError(f"p must lie in (0, inf), got {p}")
    return p


def _coeff_key(z: complex):
    return (abs(z), principal_arg(z))


@dataclass(frozen=True)
class CoefficientSet:
    """The finite alphabet ``{alpha_i}`` a comb draws its coefficients from.

    ``values`` always contains 0 and is sorted by (modulus, argument).
    ``delta`` and ``M`` are recomputed from the values; bounds supplied by
    the caller are validated and kept as ``declared_delta``/``declared_M``.
    """

    values: tuple[complex, ...]
    declared_delta: float | None = None
    declared_M: float | None = None

    @classmethod
    def from_values(
        cls, values: Iterable[complex], delta: float | None = None, M: float | None = None
    ) -> "CoefficientSet":
        vals = {complex(v) for v in values}
        vals.add(0j)
        out = cls(tuple(sorted(vals, key=_coeff_key)), delta, M)
        if delta is not None and delta > out.delta:
            raise ValueError(f"declared delta {delta} exceeds the minimum separation {out.delta}")
        if M is not None and M < out.M:
            raise ValueError(f"declared M {M} is below the maximum modulus {out.M}")
        return out

    def __post_init__(self):
        if 0j not in self.values:
            raise ValueError("a coefficient set must contain 0")
        if len(set(self.values)) != len(self.values):
            raise ValueError("coefficients must be distinct")

    @property
    def delta(self) -> float:
        """Minimum pairwise distance (``inf`` for the set ``{0}``)."""
        v = np.array(self.values)
        if v.size < 2:
            return math.inf
        diff = np.abs(v[:, None] - v[None, :])
        return float(diff[~np.eye(v.size, dtype=bool)].min())

    @property
    def M(self) -> float:
        return float(max(abs(v) for v in self.values))

    @property
    def nonzero(self) -> tuple[complex, ...]:
        return tuple(v for v in self.values if v != 0)

    def __contains__(self, z) -> bool:
        return complex(z) in self.values

    def __len__(self):
        return len(self.values)

    def nearest(self, z: complex) -> tuple[complex, float, float]:
        """Nearest coefficient, its distance, and the runner-up distance.

        Equidistant candidates resolve to the one listed first, i.e. the
        smaller modulus and then the smaller argument.
        """
        dist = [abs(z - a) for a in self.values]
        order = sorted(range(len(dist)), key=lambda i: dist[i])
        best = order[0]
        second = dist[order[1]] if len(order) > 1 else math.inf
        return self.values[best], dist[best], second

    def to_json(self) -> dict:
        return {
            "values": [[v.real, v.imag] for v in self.values],
            "delta": None if math.isinf(self.delta) else self.delta,
            "M": self.M,
        }

    @classmethod
    def from_json(cls, data) -> "CoefficientSet":
        if isinstance(data, dict):
            raw, delta, M = data["values"], data.get("declared_delta"), data.get("declared_M")
        else:
            raw, delta, M = data, None, None
        vals = [complex(*v) if isinstance(v, (list, tuple)) else complex(v) for v in raw]
        return cls.from_values(vals, delta, M)


class Part(NamedTuple):
    coeff: complex
    support: LatticeSet


@dataclass(frozen=True, eq=False)
class DiracComb:
    """A normalized Dirac comb; build instances with :func:`build_comb`."""

    grid: Grid
    parts: tuple[Part, ...]
    coefficient_set: CoefficientSet

    @property
    def gamma(self) -> int:
        return len(self.parts)

    @property
    def delta(self) -> float:
        return self.coefficient_set.delta

    @property
    def M(self) -> float:
        return self.coefficient_set.M

    @property
    def support(self) -> LatticeSet:
        out = self.grid.empty()
        for part in self.parts:
            out = out | part.support
        return out

    def is_zero(self) -> bool:
        return not self.parts

    def __eq__(self, other) -> bool:
        # part order and the coefficient alphabet do not matter
        if not isinstance(other, DiracComb):
            return NotImplemented
        return self.grid == other.grid and set(self.parts) == set(other.parts)

    def __hash__(self):
        return hash((self.grid, frozenset(self.parts)))

    def __repr__(self):
        body = ", ".join(f"({p.coeff:g}, {p.support.coords()})" for p in self.parts)
        return f"DiracComb(N={self.grid.N}, d={self.grid.d}, gamma={self.gamma}, [{body}])"

    def to_json(self) -> dict:
        return {
            "N": self.grid.N,
            "d": self.grid.d,
            "parts": [
                {"coeff": [p.coeff.real, p.coeff.imag], "support": p.support.to_json()}
                for p in self.parts
            ],
            "coefficients": [[v.real, v.imag] for v in self.coefficient_set.values],
            "delta": None if math.isinf(self.delta) else self.delta,
            "M": self.M,
            "gamma": self.gamma,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DiracComb":
        grid = Grid(int(data["N"]), int(data.get("d", 1)))
        parts = [
            (complex(*p["coeff"]), LatticeSet.from_json(grid, p["support"]))
            for p in data["parts"]
        ]
        coeffs = None
        if "coefficients" in data:
            coeffs = CoefficientSet.from_values(complex(*v) for v in data["coefficients"])
        return build_comb(grid, parts, coeffs)


def _as_set(grid: Grid, support) -> LatticeSet:
    if isinstance(support, LatticeSet):
        if support.grid != grid:
            raise DimensionError(f"{support.grid} vs {grid}")
        return support
    return LatticeSet.from_coords(grid, support)


def build_comb(
    grid: Grid,
    parts: Iterable[tuple[complex, object]] = (),
    coefficient_set: CoefficientSet | None = None,
) -> DiracComb:
    """Normalize ``parts`` into a :class:`DiracComb`.

    Equal coefficients are merged, zero coefficients and empty supports are
    dropped.  Without ``coefficient_set`` one is synthesized from the
    distinct coefficients (plus 0).

    Raises
    ------
    DisjointnessError
        If two supplied supports overlap.
    MembershipError
        If a coefficient is missing from ``coefficient_set``.
    """
    merged: dict[complex, set[int]] = {}
    seen: set[int] = set()
    for coeff, support in parts:
        coeff = complex(coeff)
        s = _as_set(grid, support)
        idx = set(s.indices.tolist())
        if seen & idx:
            raise DisjointnessError(f"support {s.coords()} overlaps an earlier part")
        seen |= idx
        if coefficient_set is not None and coeff not in coefficient_set:
            raise MembershipError(f"coefficient {coeff} not in {coefficient_set.values}")
        if coeff == 0 or not idx:
            continue
        merged.setdefault(coeff, set()).update(idx)
    if coefficient_set is None:
        coefficient_set = CoefficientSet.from_values(merged)
    out = [Part(a, LatticeSet(grid, idx)) for a, idx in merged.items()]
    out.sort(key=lambda p: p.support.indices[0])
    return DiracComb(grid, tuple(out), coefficient_set)


def _cluster(values: np.ndarray, tol: float) -> list[tuple[complex, np.ndarray]]:
    """Group nonzero values; returns (representative, flat indices) pairs.

    With ``tol == 0`` only exactly equal values share a cluster.  Otherwise
    values sorted by (real, imag) are chained while consecutive gaps stay
    below ``tol`` and each cluster is represented by its mean.  Values with
    ``|z| <= tol`` count as zero.
    """
    nz = np.flatnonzero(np.abs(values) > tol)
    if nz.size == 0:
        return []
    v = values[nz]
    order = np.lexsort((v.imag, v.real))
    v, nz = v[order], nz[order]
    if tol == 0:
        breaks = np.flatnonzero(v[1:] != v[:-1]) + 1
    else:
        breaks = np.flatnonzero(np.abs(np.diff(v)) >= tol) + 1
    groups = []
    for chunk_v, chunk_i in zip(np.split(v, breaks), np.split(nz, breaks)):
        rep = chunk_v[0] if tol == 0 else chunk_v.mean()
        groups.append((complex(rep), chunk_i))
    return groups


def decompose(f: Signal, tol: float = 0.0) -> DiracComb:
    """Minimal-complexity comb representing ``f`` (values grouped by equality)."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    groups = _cluster(f.values, tol)
    parts = [(rep, LatticeSet(f.grid, idx.tolist())) for rep, idx in groups]
    return build_comb(f.grid, parts)


def to_signal(c: DiracComb) -> Signal:
    vals = np.zeros(c.grid.size, dtype=np.complex128)
    for part in c.parts:
        vals[part.support.indices] = part.coeff
    return Signal(c.grid, vals)


@dataclass(frozen=True)
class EffectiveTriple:
    p: float
    weight: complex
    support: LatticeSet
    mass: float


def _order_key(part: Part, p: float):
    # exact rational comparison of the float |a|^p keeps the ordering free of
    # rounding-induced ties
    mass = Fraction(abs(part.coeff) ** p) * len(part.support)
    return (-mass, len(part.support), principal_arg(part.coeff))


def effective_order(c: DiracComb, p: float) -> list[Part]:
    """Parts sorted by p-effective mass, largest first, with tie-breaks."""
    p = _check_p(p)
    return sorted(c.parts, key=lambda part: _order_key(part, p))


def effective_triple(c: DiracComb, p: float) -> EffectiveTriple:
    """The p-effective weight, support and mass of a nonzero comb."""
    if c.is_zero():
        raise NoEffectiveSupportError("the zero comb has no effective support")
    first = effective_order(c, p)[0]
    p = float(p)
    return EffectiveTriple(
        p, first.coeff, first.support, abs(first.coeff) ** p * len(first.support)
    )


def concentration_level(f: Signal, E: LatticeSet, p: float) -> float:
    """Smallest ``lam`` with ``||f||_p <= lam * ||f 1_E||_p``.

    Returns ``inf`` when ``f`` vanishes on ``E`` but not elsewhere, and 1 for
    the zero signal.
    """
    p = _check_p(p)
    if E.grid != f.grid:
        raise DimensionError(f"{E.grid} vs {f.grid}")
    power = np.abs(f.values) ** p
    total = math.fsum(power)
    inside = math.fsum(power[E.indices]) if len(E) else 0.0
    if total == 0:
        return 1.0
    if inside == 0:
        return math.inf
    return (total / inside) ** (1 / p)


@dataclass(frozen=True)
class UncertaintyReport:
    p: float
    gamma: int
    effective: EffectiveTriple
    sigma: LatticeSet
    product: float
    bound: float | None
    holds: bool | None
    restriction_constant: float | None = None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "gamma": self.gamma,
            "A1": self.effective.support.to_json(),
            "A1_size": len(self.effective.support),
            "weight": [self.effective.weight.real, self.effective.weight.imag],
            "mass": self.effective.mass,
            "sigma_size": len(self.sigma),
            "product": self.product,
            "bound": self.bound,
            "holds": self.holds,
            "restriction_constant": self.restriction_constant,
        }


# slack for bounds involving irrational constants; equality is attained by
# subgroup indicators, where both sides agree only up to rounding
_REL_SLACK = 1e-12


def uncertainty_report(
    c: DiracComb,
    p: float = 2,
    restriction=None,
    tol: float = DEFAULT_SUPPORT_TOL,
    sigma: LatticeSet | None = None,
) -> UncertaintyReport:
    """Compare the effective-support uncertainty product with its lower bound.

    Without ``restriction`` the bound ``N^d / gamma`` on ``|A_1| |Sigma|``
    is available for p = 1 and p = 2 only.  With a restriction estimate
    ``(p, q, C)`` the product is ``|A_1|^{1/p} |Sigma|`` and the bound
    ``N^d / (C gamma^{1/p})``.

    ``sigma`` may override the numerically extracted spectral support with
    any superset of it.
    """
    p = _check_p(p)
    eff = effective_triple(c, p)
    support = spectrum_support(forward_dft(to_signal(c)), tol)
    if sigma is None:
        sigma = support
    elif not support.issubset(sigma):
        raise ValueError("sigma must contain the spectral support")
    n, g, a1, s = c.grid.size, c.gamma, len(eff.support), len(sigma)
    if restriction is not None:
        if not math.isclose(restriction.p, p):
            raise ValueError(f"restriction estimate is for p={restriction.p}, not {p}")
        C = float(restriction.C)
        product = a1 ** (1 / p) * s
        bound = n / (C * g ** (1 / p))
        holds = product >= bound * (1 - _REL_SLACK)
        return UncertaintyReport(p, g, eff, sigma, product, bound, holds, C)
    if p in (1.0, 2.0):
        bound = Fraction(n, g)
        return UncertaintyReport(p, g, eff, sigma, float(a1 * s), float(bound), a1 * s >= bound)
    return UncertaintyReport(p, g, eff, sigma, a1 ** (1 / p) * s, None, None)


def effective_sizes(
    values: np.ndarray, p: float
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``(gamma, |A_1|)`` for a batch of signals.

    ``values`` has shape ``(B, N^d)``; every row is read as a comb over the
    distinct nonzero values of the whole batch, which must be a small
    alphabet.  Rows that are identically zero get ``gamma = |A_1| = 0``.
    """
    p = _check_p(p)
    values = np.asarray(values)
    alphabet = sorted({complex(v) for v in np.unique(values) if v != 0}, key=_coeff_key)
    B = values.shape[0]
    gamma = np.zeros(B, dtype=np.int64)
    best_mass = np.full(B, -1.0)
    best_size = np.zeros(B, dtype=np.int64)
    best_arg = np.zeros(B)
    for a in alphabet:
        cnt = np.count_nonzero(values == a, axis=1)
        gamma += cnt > 0
        mass = abs(a) ** p * cnt
        arg = principal_arg(a)
        better = (cnt > 0) & (
            (mass > best_mass)
            | ((mass == best_mass) & (cnt < best_size))
            | ((mass == best_mass) & (cnt == best_size) & (arg < best_arg))
        )
        best_mass = np.where(better, mass, best_mass)
        best_size = np.where(better, cnt, best_size)
        best_arg = np.where(better, arg, best_arg)
    return gamma, best_size


def spectrum_support_sizes(values: np.ndarray, grid: Grid, tol: float = DEFAULT_SUPPORT_TOL) -> np.ndarray:
    """``|supp F|`` for each row of a ``(B, N^d)`` batch of signals."""
    arr = np.asarray(values).reshape((values.shape[0],) + grid.shape)
    F = np.fft.fftn(arr, axes=tuple(range(1, grid.d + 1))) / grid.size
    return np.count_nonzero(np.abs(F.reshape(values.shape[0], -1)) > tol, axis=1)


def random_comb(
    grid: Grid,
    rng: np.random.Generator,
    gamma: int,
    coefficients: Sequence[complex] | CoefficientSet | None = None,
    support_sizes: Sequence[int] | None = None,
) -> DiracComb:
    """Draw a comb with exactly ``gamma`` parts.

    Coefficients are distinct draws from ``coefficients`` (nonzero members),
    or rounded complex Gaussians when none are given.  Supports partition a
    random subset of the grid; ``support_sizes`` fixes their sizes.
    """
    if isinstance(coefficients, CoefficientSet):
        cset = coefficients
        pool = list(cset.nonzero)
    elif coefficients is not None:
        cset = CoefficientSet.from_values(coefficients)
        pool = list(cset.nonzero)
    else:
        cset, pool = None, None
    if pool is not None:
        if gamma > len(pool):
            raise ValueError(f"cannot draw {gamma} distinct coefficients from {len(pool)}")
        coeffs = [pool[i] for i in rng.choice(len(pool), size=gamma, replace=False)]
    else:
        coeffs = []
        while len(coeffs) < gamma:
            z = complex(*np.round(rng.normal(size=2) * 4, 2))
            if z != 0 and z not in coeffs:
                coeffs.append(z)
    if support_sizes is None:
        total = int(rng.integers(gamma, grid.size + 1))
        cuts = np.sort(rng.choice(np.arange(1, total), size=gamma - 1, replace=False)) if gamma > 1 else []
        support_sizes = np.diff(np.concatenate([[0], cuts, [total]])).astype(int).tolist()
    if len(support_sizes) != gamma or sum(support_sizes) > grid.size:
        raise ValueError("support sizes do not fit the grid")
    perm = rng.permutation(grid.size)
    parts, start = [], 0
    for a, k in zip(coeffs, support_sizes):
        parts.append((a, LatticeSet(grid, perm[start:start + k].tolist())))
        start += k
    return build_comb(grid, parts, cset)
