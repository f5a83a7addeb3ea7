"""Monte Carlo estimation of the infinite-horizon ruin probability.

Between claims the surplus grows linearly, so ruin can only happen at claim
instants and it suffices to simulate the claim-epoch skeleton

    S_i = x + c T_i - sum_{j <= i} (xi_j - eta_j).

Paths are processed in fixed-size chunks.  Chunk ``k`` draws from a
``numpy`` stream spawned from ``SeedSequence(seed, spawn_key=(k,))``, so results
depend only on the seed and never on how chunks are scheduled over workers.

A single walk started at zero serves every initial surplus ``x`` at once:
ruin from ``x`` happens iff the running minimum of the walk drops below ``-x``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import dist
from .errors import DomainError
from .lundberg import adjustment_coefficient
from .model import RiskModel, net_profit_margin

CHUNK_PATHS = 1 << 15
BLOCK_STEPS = 32
DEFAULT_CAP_TOLERANCE = 1e-6
DEFAULT_MAX_CLAIMS = 1_000_000


@dataclass(frozen=True)
class SurplusCap:
    """Declare survival once the surplus reaches ``level``."""

    level: float


@dataclass(frozen=True)
class ClaimCap:
    """Declare survival after ``max_claims`` claims without ruin."""

    max_claims: int


Truncation = Union[SurplusCap, ClaimCap]


@dataclass(frozen=True)
class SimPlan:
    n_paths: int
    seed: int
    truncation: Truncation
    x: float = 0.0

    def __post_init__(self) -> None:
        if self.n_paths < 1:
            raise DomainError(f"n_paths must be at least 1, got {self.n_paths}")
        _check_seed(self.seed)
        if self.x < 0:
            raise DomainError(f"initial surplus must be nonnegative, got {self.x}")
        _check_truncation(self.truncation)
        if isinstance(self.truncation, SurplusCap) and not self.truncation.level > self.x:
            raise DomainError(
                f"surplus cap {self.truncation.level} must exceed the initial surplus {self.x}"
            )


@dataclass(frozen=True)
class SimResult:
    """Outcome of a ruin-frequency run at one initial surplus.

    ``analytic`` marks results decided without simulation (net profit
    condition fails, so ``psi == 1``); those carry ``n_paths == 0``.
    """

    x: float
    ruined: int
    n_paths: int
    psi_hat: float
    truncated_paths: int
    analytic: bool = False

    def hoeffding_radius(self, delta: float) -> float:
        if self.analytic:
            return 0.0
        return hoeffding_radius(self.n_paths, delta)


@dataclass(frozen=True)
class Ruined:
    at_claim: int


@dataclass(frozen=True)
class Survived:
    reason: str


PathOutcome = Union[Ruined, Survived]


def _check_seed(seed: int) -> None:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")


def _check_truncation(truncation: Truncation) -> None:
    if isinstance(truncation, SurplusCap):
        if not (truncation.level > 0 and math.isfinite(truncation.level)):
            raise DomainError(f"surplus cap must be positive and finite, got {truncation.level}")
    elif isinstance(truncation, ClaimCap):
        if truncation.max_claims < 1:
            raise DomainError(f"claim cap must be at least 1, got {truncation.max_claims}")
    else:
        raise TypeError(f"unknown truncation {truncation!r}")


def hoeffding_n(epsilon: float, delta: float) -> int:
    """Smallest ``N`` with ``2 exp(-2 epsilon^2 N) <= delta``."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if delta >= 2:
        return 0
    n = math.ceil(math.log(2.0 / delta) / (2.0 * epsilon * epsilon))
    # guard the ceiling against rounding in the logarithm
    while n > 0 and 2.0 * math.exp(-2.0 * epsilon * epsilon * (n - 1)) <= delta:
        n -= 1
    while 2.0 * math.exp(-2.0 * epsilon * epsilon * n) > delta:
        n += 1
    return n


def hoeffding_radius(n_paths: int, delta: float) -> float:
    """``epsilon`` such that ``P[|psi - psi_hat| > epsilon] <= delta`` with ``n_paths`` paths."""
    if n_paths < 1:
        raise DomainError("radius needs at least one path")
    if not 0 < delta:
        raise DomainError(f"delta must be positive, got {delta}")
    if delta >= 2:
        return 0.0
    return math.sqrt(math.log(2.0 / delta) / (2.0 * n_paths))


def default_truncation(
    model: RiskModel, x: float = 0.0, tolerance: float = DEFAULT_CAP_TOLERANCE
) -> Truncation:
    """Surplus cap at ``x + L`` with ``exp(-R L) = tolerance``.

    Once the surplus reaches that level the remaining ruin probability is at
    most ``tolerance`` by the exponential bound.  Falls back to a claim cap
    when no adjustment coefficient exists.
    """
    if not 0 < tolerance < 1:
        raise DomainError(f"cap tolerance must lie in (0, 1), got {tolerance}")
    if model.ruin_impossible:
        return SurplusCap(x + 1.0)
    try:
        r_hat = adjustment_coefficient(model).r_hat
    except Exception:
        return ClaimCap(DEFAULT_MAX_CLAIMS)
    return SurplusCap(x + math.log(1.0 / tolerance) / r_hat)


def simulate_path(
    model: RiskModel, x: float, truncation: Truncation, stream: np.random.Generator
) -> PathOutcome:
    """Simulate one skeleton path until ruin or truncation."""
    if x < 0:
        raise DomainError(f"initial surplus must be nonnegative, got {x}")
    _check_truncation(truncation)
    gap = model.premium_rate / model.claim_intensity
    level = truncation.level if isinstance(truncation, SurplusCap) else math.inf
    max_claims = truncation.max_claims if isinstance(truncation, ClaimCap) else None
    surplus = float(x)
    if surplus >= level:
        return Survived("surplus-cap")
    i = 0
    while True:
        i += 1
        surplus += gap * stream.standard_exponential()
        surplus -= dist.sample(model.claims, stream)
        surplus += dist.sample(model.funds, stream)
        if surplus < 0:
            return Ruined(i)
        if surplus >= level:
            return Survived("surplus-cap")
        if max_claims is not None and i >= max_claims:
            return Survived("claim-cap")


def _chunk_stream(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(chunk,)))


def _walk_minima(
    model: RiskModel,
    n: int,
    rng: np.random.Generator,
    up: float,
    down: float,
    max_claims: int | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Running minima of ``n`` skeleton walks started at zero.

    A walk stops when it first reaches ``up`` or drops below ``down`` (its
    minimum is then final for every threshold of interest), or after
    ``max_claims`` steps.  Returns the minima and a mask of claim-capped walks.
    """
    gap = model.premium_rate / model.claim_intensity
    minima = np.empty(n)
    capped = np.zeros(n, dtype=bool)
    active = np.arange(n)
    pos = np.zeros(n)
    low = np.zeros(n)
    steps = 0
    while active.size:
        width = BLOCK_STEPS if max_claims is None else min(BLOCK_STEPS, max_claims - steps)
        shape = (active.size, width)
        inc = gap * rng.standard_exponential(shape)
        inc -= dist.sample(model.claims, rng, shape)
        inc += dist.sample(model.funds, rng, shape)
        path = np.cumsum(inc, axis=1)
        path += pos[:, None]
        running = np.minimum.accumulate(path, axis=1)
        np.minimum(running, low[:, None], out=running)
        stop = (path >= up) | (path < down)
        hit = stop.any(axis=1)
        first = stop.argmax(axis=1)
        done = np.flatnonzero(hit)
        minima[active[done]] = running[done, first[done]]
        steps += width
        keep = ~hit
        if max_claims is not None and steps >= max_claims:
            minima[active[keep]] = running[keep, -1]
            capped[active[keep]] = True
            break
        active = active[keep]
        pos = path[keep, -1]
        low = running[keep, -1]
    return minima, capped


def _run_chunk(args) -> tuple[np.ndarray, np.ndarray]:
    model, seed, chunk, n, xs, up, down, max_claims = args
    minima, capped = _walk_minima(model, n, _chunk_stream(seed, chunk), up, down, max_claims)
    ruined = np.array([np.count_nonzero(minima < -x) for x in xs], dtype=np.int64)
    capped_survivors = np.array(
        [np.count_nonzero(capped & (minima >= -x)) for x in xs], dtype=np.int64
    )
    return ruined, capped_survivors


def estimate_ruin_grid(
    model: RiskModel,
    xs: Sequence[float],
    n_paths: int,
    seed: int,
    truncation: Truncation | None = None,
    workers: int | None = 1,
) -> list[SimResult]:
    """Ruin-frequency estimates at every ``x`` in ``xs`` from one set of paths.

    With a :class:`SurplusCap` the walk stops once the surplus started from
    ``min(xs)`` reaches ``level``; larger ``x`` are therefore truncated at an
    even higher surplus.  ``workers=None`` uses every available CPU.
    """
    xs = [float(x) for x in xs]
    if not xs:
        raise DomainError("need at least one initial surplus")
    if min(xs) < 0:
        raise DomainError("initial surplus must be nonnegative")
    if n_paths < 1:
        raise DomainError(f"n_paths must be at least 1, got {n_paths}")
    _check_seed(seed)

    if net_profit_margin(model) <= 0:
        return [SimResult(x, 0, 0, 1.0, 0, analytic=True) for x in xs]

    x_lo, x_hi = min(xs), max(xs)
    if truncation is None:
        truncation = default_truncation(model, x_lo)
    _check_truncation(truncation)
    if isinstance(truncation, SurplusCap):
        if not truncation.level > x_lo:
            raise DomainError(f"surplus cap {truncation.level} must exceed every initial surplus")
        up, max_claims = truncation.level - x_lo, None
    else:
        up, max_claims = math.inf, truncation.max_claims

    n_chunks = -(-n_paths // CHUNK_PATHS)
    jobs = [
        (model, seed, k, min(CHUNK_PATHS, n_paths - k * CHUNK_PATHS), xs, up, -x_hi, max_claims)
        for k in range(n_chunks)
    ]
    if workers is None:
        workers = os.cpu_count() or 1
    workers = max(1, min(workers, n_chunks))
    if workers == 1:
        parts = [_run_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))

    ruined = sum((p[0] for p in parts), np.zeros(len(xs), dtype=np.int64))
    capped = sum((p[1] for p in parts), np.zeros(len(xs), dtype=np.int64))
    results = []
    for j, x in enumerate(xs):
        r = int(ruined[j])
        # every survivor under a surplus cap was stopped by the cap
        trunc = n_paths - r if isinstance(truncation, SurplusCap) else int(capped[j])
        results.append(SimResult(x, r, n_paths, r / n_paths, trunc))
    return results


def estimate_ruin(model: RiskModel, plan: SimPlan, workers: int | None = 1) -> SimResult:
    """Ruin-frequency estimate ``psi_hat(x)`` for ``plan.x``."""
    return estimate_ruin_grid(
        model, [plan.x], plan.n_paths, plan.seed, plan.truncation, workers=workers
    )[0]
