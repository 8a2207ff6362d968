"""Exhaustive least-squares search over candidate supports.

For every support ``tau`` of the requested size, solve::

    min_s || P_{S^c} f - P_{S^c} s ||    subject to  supp(s) in tau

and keep the global minimizer.  The residual is reported in the signal
domain, which is ``N^{d/2}`` times the spectral residual.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from ..comb import decompose, to_signal
from ..errors import CapExceededError
from ..fourier import Signal, dft_matrix, forward_dft
from .channel import AMBIGUOUS, CONSISTENCY_TOL, RECOVERED, ObservedSpectrum, RecoveryOutcome

DEFAULT_SUPPORT_CAP = 10**6
RESIDUAL_TOL = 1e-8
SEPARATION = 10.0
SNAP_TOL = 1e-9


def _solve(A_tau: np.ndarray, y: np.ndarray):
    # SVD-based solve; a deficient rank means the minimizer on tau is not unique
    if A_tau.shape[1] == 0:
        return np.zeros(0, dtype=np.complex128), float(np.linalg.norm(y)), 0
    sol, _, rank, _ = np.linalg.lstsq(A_tau, y, rcond=None)
    resid = np.linalg.norm(y - A_tau @ sol)
    return sol, float(resid), int(rank)


def candidate_count(n: int, k: int, all_sizes: bool = False) -> int:
    if all_sizes and k > 0:
        return sum(math.comb(n, j) for j in range(1, k + 1))
    return math.comb(n, k)


def ls_support_search(
    obs: ObservedSpectrum,
    k: int,
    cap: int = DEFAULT_SUPPORT_CAP,
    all_sizes: bool = False,
    tol: float = RESIDUAL_TOL,
    separation: float = SEPARATION,
) -> RecoveryOutcome:
    """Recover a signal of known support size from its unerased frequencies.

    The outcome is ``recovered`` when the best residual is below ``tol``,
    its least-squares problem has full column rank, and every other
    candidate's residual exceeds ``separation * max(best, tol)``.  Otherwise
    it is ``ambiguous`` and the certificate lists the near-tied supports.

    Raises
    ------
    CapExceededError
        If the number of candidate supports exceeds ``cap``.
    """
    grid = obs.grid
    n = grid.size
    if not 0 <= k <= n:
        raise ValueError(f"support size must lie in [0, {n}], got {k}")
    count = candidate_count(n, k, all_sizes)
    if count > cap:
        raise CapExceededError(f"{count} candidate supports exceed the cap of {cap}")
    A = dft_matrix(grid, rows=obs.observed.indices)
    y = obs.values
    scale = math.sqrt(n)
    sizes = range(1, k + 1) if all_sizes and k > 0 else (k,)
    results = []
    for j in sizes:
        for tau in itertools.combinations(range(n), j):
            sol, resid, rank = _solve(A[:, tau], y)
            results.append((resid * scale, tau, sol, rank))
    # min by (residual, canonical order of tau); sort is stable
    results.sort(key=lambda r: r[0])
    best_resid, best_tau, best_sol, best_rank = results[0]
    runner_up = results[1][0] if len(results) > 1 else math.inf
    threshold = separation * max(best_resid, tol)
    near = [r for r in results if r[0] <= threshold]
    cert = {
        "best_residual": best_resid,
        "runner_up_residual": runner_up,
        "best_support": [list(grid.coords(i)) for i in best_tau],
        "rank": best_rank,
        "candidates": len(results),
        "near_ties": [[list(grid.coords(i)) for i in r[1]] for r in near[:64]],
    }
    values = np.zeros(n, dtype=np.complex128)
    values[list(best_tau)] = best_sol
    re, im = values.real.copy(), values.imag.copy()
    re[np.abs(re) <= SNAP_TOL] = 0
    im[np.abs(im) <= SNAP_TOL] = 0
    values = re + 1j * im
    comb = decompose(Signal(grid, values), tol=SNAP_TOL)
    unique = (
        best_resid < tol
        and best_rank == len(best_tau)
        and runner_up > threshold
    )
    if not unique:
        return RecoveryOutcome(AMBIGUOUS, None, cert)
    cert["consistency_error"] = obs.mismatch(forward_dft(to_signal(comb)))
    if not cert["consistency_error"] <= CONSISTENCY_TOL:
        return RecoveryOutcome(AMBIGUOUS, None, cert)
    return RecoveryOutcome(RECOVERED, comb, cert)
