"""(p, q)-restriction constants for frequency sets.

For ``Sigma`` a set of frequencies the restriction ratio of a signal is::

    (|Sigma|^{-1} sum_{m in Sigma} |F(m)|^q)^{1/q} / (N^{-d} ||f||_p)

A constant ``C`` is valid for ``(p, q, Sigma)`` when it bounds that ratio
for every signal.  Only ``p = q = 2`` has an exact value here (a largest
singular value); every other pair is estimated from below by search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg

from .errors import EmptySetError, GridSizeError
from .fourier import Signal, dft_matrix
from .lattice import Grid, LatticeSet

EXACT = "exact"
EMPIRICAL = "empirical-lower-bound"
ANALYTIC = "analytic"
PROVENANCES = (EXACT, EMPIRICAL, ANALYTIC)

DEFAULT_LINALG_CAP = 4096
FD_STEP = 1e-5
REFINE_STEPS = 100


@dataclass(frozen=True, eq=False)
class RestrictionEstimate:
    p: float
    q: float
    sigma: LatticeSet
    C: float
    provenance: str
    seed: int | None = None
    witness: Signal | None = None
    derived_from: str | None = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if not (self.p >= 1 and self.q >= self.p):
            raise ValueError(f"need 1 <= p <= q, got p={self.p}, q={self.q}")
        if not self.C > 0:
            raise ValueError("restriction constant must be positive")

    def to_json(self) -> dict:
        return {
            "p": _num(self.p),
            "q": _num(self.q),
            "C": self.C,
            "provenance": self.provenance,
            "seed": self.seed,
            "derived_from": self.derived_from,
            "N": self.sigma.grid.N,
            "d": self.sigma.grid.d,
            "sigma": self.sigma.to_json(),
            "witness": None if self.witness is None else self.witness.to_json()["values"],
        }


@dataclass(frozen=True, eq=False)
class LambdaQEstimate:
    q: float
    sigma: LatticeSet
    constant: float
    seed: int | None
    trials: int
    witness: np.ndarray | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "q": _num(self.q),
            "constant": self.constant,
            "seed": self.seed,
            "trials": self.trials,
            "N": self.sigma.grid.N,
            "d": self.sigma.grid.d,
            "sigma": self.sigma.to_json(),
            "witness_coefficients": None if self.witness is None
            else [[float(z.real), float(z.imag)] for z in self.witness],
        }


def _num(x):
    return "inf" if math.isinf(x) else x


def _nonempty(sigma: LatticeSet):
    if len(sigma) == 0:
        raise EmptySetError("restriction estimates need a nonempty frequency set")


def _spectra(batch: np.ndarray, grid: Grid) -> np.ndarray:
    arr = batch.reshape((batch.shape[0],) + grid.shape)
    F = np.fft.fftn(arr, axes=tuple(range(1, grid.d + 1))) / grid.size
    return F.reshape(batch.shape[0], -1)


def _pnorm(a: np.ndarray, p: float) -> np.ndarray:
    if math.isinf(p):
        return np.abs(a).max(axis=-1)
    return (np.abs(a) ** p).sum(axis=-1) ** (1 / p)


def restriction_ratios(
    batch: np.ndarray, sigma: LatticeSet, p: float, q: float
) -> np.ndarray:
    """Restriction ratio for each row of a ``(B, N^d)`` batch of signals.

    ``q = inf`` uses ``max_{Sigma} |F|``; ``p = inf`` uses ``max |f|``.
    Zero rows give ratio 0.
    """
    grid = sigma.grid
    batch = np.atleast_2d(np.asarray(batch, dtype=np.complex128))
    F = _spectra(batch, grid)[:, sigma.indices]
    if math.isinf(q):
        num = np.abs(F).max(axis=1)
    else:
        num = ((np.abs(F) ** q).mean(axis=1)) ** (1 / q)
    den = _pnorm(batch, p) / grid.size
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0, num / den, 0.0)
    return out


def restriction_ratio(f: Signal, sigma: LatticeSet, p: float, q: float) -> float:
    return float(restriction_ratios(f.values[None, :], sigma, p, q)[0])


def trivial_c1q(sigma: LatticeSet, q: float) -> RestrictionEstimate:
    """``C_{1,q} = 1`` holds for every nonempty set (triangle inequality)."""
    _nonempty(sigma)
    if q < 1:
        raise ValueError("q must be >= 1")
    return RestrictionEstimate(1.0, float(q), sigma, 1.0, ANALYTIC)


def _top_singular_value(A: np.ndarray) -> float:
    if min(A.shape) <= 512:
        return float(np.linalg.svd(A, compute_uv=False)[0])
    s = scipy.sparse.linalg.svds(A, k=1, return_singular_vectors=False, random_state=0)
    return float(s[0])


def exact_c22(sigma: LatticeSet, cap: int = DEFAULT_LINALG_CAP) -> RestrictionEstimate:
    """Smallest valid ``C_{2,2}`` for ``sigma``.

    This is the operator norm of ``f -> |Sigma|^{-1/2} (F(m))_{m in Sigma}``
    from l2 of the grid, divided by ``N^{-d}``.
    """
    _nonempty(sigma)
    grid = sigma.grid
    if grid.size > cap:
        raise GridSizeError(f"grid size {grid.size} exceeds the linear-algebra cap {cap}")
    A = dft_matrix(grid, rows=sigma.indices) / math.sqrt(len(sigma))
    C = _top_singular_value(A) * grid.size
    return RestrictionEstimate(2.0, 2.0, sigma, C, EXACT)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # one stream per trial: results do not depend on evaluation order
    return np.random.default_rng([int(seed), int(trial)])


def _candidate(grid: Grid, sigma: LatticeSet, trial: int, rng: np.random.Generator) -> np.ndarray:
    """Trial signal; families rotate sparse -> gaussian -> modulated indicator."""
    n = grid.size
    family = trial % 3
    if family == 0:
        k = min((1, 2, 4)[(trial // 3) % 3], n)
        f = np.zeros(n, dtype=np.complex128)
        where = rng.choice(n, size=k, replace=False)
        f[where] = rng.normal(size=k) + 1j * rng.normal(size=k)
        return f
    if family == 1:
        return rng.normal(size=n) + 1j * rng.normal(size=n)
    m0 = sigma.indices[rng.integers(len(sigma))]
    coords = grid.coord_array
    chi = np.exp(2j * np.pi * ((coords @ coords[m0]) % grid.N) / grid.N)
    if rng.random() < 0.5:
        # box starting at a random corner
        lo = rng.integers(grid.N, size=grid.d)
        length = rng.integers(1, grid.N + 1, size=grid.d)
        mask = np.all((coords - lo) % grid.N < length, axis=1)
    else:
        # coset of the subgroup generated by a random step
        step = rng.integers(grid.N, size=grid.d)
        base = rng.integers(grid.N, size=grid.d)
        pts = (base + np.outer(np.arange(grid.N), step)) % grid.N
        mask = np.zeros(n, dtype=bool)
        mask[np.ravel_multi_index(pts.T, grid.shape)] = True
    return chi * mask


def _ratio_batch(batch, sigma, p, q, chunk=2048):
    return np.concatenate(
        [restriction_ratios(batch[i:i + chunk], sigma, p, q) for i in range(0, len(batch), chunk)]
    )


def refine(
    f: np.ndarray,
    sigma: LatticeSet,
    p: float,
    q: float,
    steps: int = REFINE_STEPS,
    h: float = FD_STEP,
) -> tuple[np.ndarray, float]:
    """Normalized gradient ascent on the restriction ratio.

    The gradient over the 2 N^d real parameters comes from central
    differences with step ``h`` (relative to ``||f||_2``).  A step is taken
    along the unit gradient and halved until the ratio improves; the
    iterate is renormalized after every accepted step.
    """
    n = f.size
    norm = np.linalg.norm(f)
    if norm == 0:
        return f, 0.0
    f = f / norm
    best = float(_ratio_batch(f[None], sigma, p, q)[0])
    eye = np.eye(n)
    basis = np.concatenate([eye, 1j * eye])
    eta = 0.5
    for _ in range(steps):
        probes = np.concatenate([f + h * basis, f - h * basis])
        r = _ratio_batch(probes, sigma, p, q)
        grad = (r[: 2 * n] - r[2 * n:]) / (2 * h)
        g = grad[:n] + 1j * grad[n:]
        gnorm = np.linalg.norm(g)
        if gnorm == 0 or not np.isfinite(gnorm):
            break
        g /= gnorm
        improved = False
        while eta > 1e-8:
            cand = f + eta * g
            cand /= np.linalg.norm(cand)
            val = float(_ratio_batch(cand[None], sigma, p, q)[0])
            if val > best:
                f, best, improved = cand, val, True
                eta = min(2 * eta, 1.0)
                break
            eta /= 2
        if not improved:
            break
    return f, best


def empirical_cpq(
    sigma: LatticeSet,
    p: float,
    q: float,
    trials: int = 1000,
    seed: int = 0,
    refine_steps: int = REFINE_STEPS,
) -> RestrictionEstimate:
    """Lower bound for ``C_{p,q}(sigma)`` from random and structured trials.

    The best trial signal is refined by :func:`refine`; the returned
    estimate carries that signal as its witness.
    """
    _nonempty(sigma)
    if not (1 <= p <= q):
        raise ValueError(f"need 1 <= p <= q, got p={p}, q={q}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    grid = sigma.grid
    batch = np.stack([_candidate(grid, sigma, t, _trial_rng(seed, t)) for t in range(trials)])
    ratios = _ratio_batch(batch, sigma, p, q)
    k = int(np.argmax(ratios))
    witness, best = batch[k], float(ratios[k])
    if refine_steps > 0:
        refined, val = refine(witness, sigma, p, q, steps=refine_steps)
        if val > best:
            witness, best = refined, val
    return RestrictionEstimate(
        float(p), float(q), sigma, best, EMPIRICAL, seed=seed, witness=Signal(grid, witness)
    )


def generic_set_size(grid: Grid, q: float) -> int:
    """``ceil(N^{2d/q})`` computed without floating-point overshoot."""
    if not q > 2:
        raise ValueError("q must exceed 2")
    target = grid.N ** (2 * grid.d)
    r = target ** (1 / q)
    c = round(r)
    if float(q).is_integer() and c ** int(q) == target:
        return min(c, grid.size)
    return min(math.ceil(r), grid.size)


def bourgain_generic_set(grid: Grid, q: float, seed: int = 0) -> LatticeSet:
    """Uniform random subset of size ``ceil(N^{2d/q})``."""
    k = generic_set_size(grid, q)
    rng = np.random.default_rng(seed)
    return LatticeSet(grid, rng.choice(grid.size, size=k, replace=False).tolist())


def lambda_q_ratio(coeffs: np.ndarray, sigma: LatticeSet, q: float) -> float:
    """``||g||_{L^q(mu)} / ||g||_{L^2(mu)}`` for ``g = sum c_m chi(x.m)``."""
    return float(_lambda_ratios(np.atleast_2d(coeffs), sigma, q)[0])


def _lambda_ratios(coeffs: np.ndarray, sigma: LatticeSet, q: float) -> np.ndarray:
    grid = sigma.grid
    full = np.zeros((coeffs.shape[0], grid.size), dtype=np.complex128)
    full[:, sigma.indices] = coeffs
    arr = full.reshape((coeffs.shape[0],) + grid.shape)
    g = np.fft.ifftn(arr, axes=tuple(range(1, grid.d + 1))) * grid.size
    a = np.abs(g.reshape(coeffs.shape[0], -1))
    if math.isinf(q):
        num = a.max(axis=1)
    else:
        num = ((a ** q).mean(axis=1)) ** (1 / q)
    den = np.sqrt((a ** 2).mean(axis=1))
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, num / den, 0.0)


def empirical_lambda_q(
    sigma: LatticeSet, q: float, trials: int = 1000, seed: int = 0
) -> LambdaQEstimate:
    """Running maximum of the L^q / L^2 ratio over spectral polynomials on ``sigma``.

    Trial 0 is the all-ones coefficient vector (a Dirichlet kernel), trial 1
    a single character, and the rest complex Gaussian coefficients.
    """
    _nonempty(sigma)
    if not q > 2:
        raise ValueError("q must exceed 2")
    k = len(sigma)
    rows = []
    for t in range(trials):
        if t == 0:
            rows.append(np.ones(k, dtype=np.complex128))
        elif t == 1:
            rows.append(np.eye(k, dtype=np.complex128)[0])
        else:
            rng = _trial_rng(seed, t)
            rows.append(rng.normal(size=k) + 1j * rng.normal(size=k))
    if not rows:
        return LambdaQEstimate(float(q), sigma, 0.0, seed, 0)
    coeffs = np.stack(rows)
    ratios = np.concatenate(
        [_lambda_ratios(coeffs[i:i + 2048], sigma, q) for i in range(0, trials, 2048)]
    )
    j = int(np.argmax(ratios))
    return LambdaQEstimate(float(q), sigma, float(ratios[j]), seed, trials, coeffs[j])


def lambda_to_restriction(est: LambdaQEstimate, grid: Grid | None = None) -> RestrictionEstimate:
    """Translate a Lambda_q constant into a ``(q', 2)`` restriction constant.

    ``C = C(q) * (N^{2d/q} / |Sigma|)^{1/2}`` with ``q' = q / (q - 1)``.  The
    result is analytic given ``C(q)``; since ``C(q)`` is itself an empirical
    lower bound, ``derived_from`` records that.
    """
    q = est.q
    if not q > 2:
        raise ValueError("q must exceed 2")
    grid = grid or est.sigma.grid
    factor = math.sqrt(grid.N ** (2 * grid.d / q) / len(est.sigma))
    q_conj = q / (q - 1)
    return RestrictionEstimate(
        q_conj, 2.0, est.sigma, est.constant * factor, ANALYTIC,
        seed=est.seed, derived_from=EMPIRICAL,
    )


@dataclass(frozen=True)
class GenericSetStatistic:
    """How often a sampled generic set shows a Lambda_q ratio above ``threshold``."""

    q: float
    threshold: float
    sets: int
    failures: int
    constants: tuple[float, ...]

    @property
    def failure_rate(self) -> float:
        return self.failures / self.sets if self.sets else 0.0

    def to_json(self) -> dict:
        return {
            "q": _num(self.q),
            "threshold": self.threshold,
            "sets": self.sets,
            "failures": self.failures,
            "failure_rate": self.failure_rate,
            "constants": list(self.constants),
        }


def generic_set_failure_rate(
    grid: Grid, q: float, threshold: float, sets: int = 20, trials: int = 200, seed: int = 0
) -> GenericSetStatistic:
    """Observed rate of generic sets whose empirical ``C(q)`` exceeds ``threshold``.

    Set ``j`` is drawn with seed ``(seed, j)`` flattened into one integer
    stream; its constant comes from :func:`empirical_lambda_q`.  This is
    an observation, not a check of the probabilistic guarantee.
    """
    constants = []
    for j in range(sets):
        set_seed = int(np.random.default_rng([int(seed), j]).integers(2**63))
        sigma = bourgain_generic_set(grid, q, set_seed)
        constants.append(empirical_lambda_q(sigma, q, trials, set_seed).constant)
    failures = sum(c > threshold for c in constants)
    return GenericSetStatistic(float(q), float(threshold), sets, failures, tuple(constants))
