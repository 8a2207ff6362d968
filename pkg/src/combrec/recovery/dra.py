"""Direct rounding: invert the surviving frequencies and snap to the alphabet."""
from __future__ import annotations

import numpy as np

from ..comb import CoefficientSet, build_comb, to_signal
from ..errors import EmptySetError
from ..fourier import forward_dft, inverse_dft
from ..lattice import LatticeSet
from .channel import (
    AMBIGUOUS,
    CONSISTENCY_TOL,
    FAILED,
    RECOVERED,
    ObservedSpectrum,
    RecoveryOutcome,
    missing_part,
)


def observed_part(obs: ObservedSpectrum) -> np.ndarray:
    """``I(x) = sum_{m not in S} chi(x.m) F(m)`` for every x."""
    return inverse_dft(obs.zero_filled()).values


def dra_recover(obs: ObservedSpectrum, coeffs: CoefficientSet) -> RecoveryOutcome:
    """Round ``I(x)`` to the nearest known coefficient at every point.

    The outcome is ``recovered`` only if every point lies strictly within
    ``delta / 2`` of some coefficient and the rounded comb reproduces the
    observed frequencies to ``1e-8``.  A point at distance ``>= delta/2``
    (this includes equidistant candidates) makes the outcome ``ambiguous``.
    """
    if coeffs is None or len(coeffs) == 0:
        raise EmptySetError("the coefficient set is empty")
    if not isinstance(coeffs, CoefficientSet):
        coeffs = CoefficientSet.from_values(coeffs)
    grid = obs.grid
    I = observed_part(obs)
    alphabet = np.array(coeffs.values)
    dist = np.abs(I[:, None] - alphabet[None, :])
    # stable sort keeps the (modulus, argument) order of the alphabet on ties
    order = np.argsort(dist, axis=1, kind="stable")
    nearest = order[:, 0]
    margins = dist[np.arange(grid.size), nearest]
    half = coeffs.delta / 2
    cert = {
        "max_margin": float(margins.max()),
        "half_delta": half,
        "delta": coeffs.delta,
        "M": coeffs.M,
    }
    bad = np.flatnonzero(margins >= half)
    if bad.size:
        cert["ambiguous_points"] = [list(grid.coords(int(i))) for i in bad[:64]]
        return RecoveryOutcome(AMBIGUOUS, None, cert)
    values = alphabet[nearest]
    parts = [
        (a, LatticeSet(grid, np.flatnonzero(values == a).tolist()))
        for a in coeffs.nonzero
        if np.any(values == a)
    ]
    comb = build_comb(grid, parts, coeffs)
    err = obs.mismatch(forward_dft(to_signal(comb)))
    cert["consistency_error"] = err
    if not err <= CONSISTENCY_TOL:
        return RecoveryOutcome(FAILED, None, cert)
    return RecoveryOutcome(RECOVERED, comb, cert)


def margin_chain(f, S: LatticeSet, A1_size: int, gamma: int, M: float) -> dict:
    """Quantities in the pointwise bound on the erased contribution.

    Returns ``max |II(x)|`` and ``|S| N^{-d} gamma |A_1| M``; under the
    l1 condition the first is at most the second, which is below delta/2.
    """
    II = missing_part(f, S)
    bound = len(S) / f.grid.size * gamma * A1_size * M
    return {"max_II": float(np.max(np.abs(II))) if II.size else 0.0, "bound": bound}
