"""Adjustment coefficient and the exponential (Lundberg-type) upper bound.

The adjustment coefficient is the positive root of

    g(R) = lambda * (E[exp(R xi)] * E[exp(-R eta)] - 1) - c R,

which is convex with ``g(0) = 0`` and ``g'(0) = -(c - lambda mu1 + lambda mu2)``.
Bisection on ``g`` itself (never on a rearranged polynomial) keeps the search
inside the claim MGF domain where the root is unique.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dist
from .errors import BracketingError, DomainError, NoPositiveRootError, UnsupportedModelError
from .model import RiskModel, net_profit_margin

DEFAULT_TOL = 1e-12
_BOUNDARY_FRACTION = 1.0 - 1e-9
_MAX_EXPANSIONS = 200
_MAX_BISECTIONS = 400


@dataclass(frozen=True)
class AdjustmentResult:
    r_hat: float
    bracket: tuple[float, float]
    residual: float
    iterations: int


def adjustment_function(model: RiskModel, r: float) -> float:
    """``g(r)``; ``+inf`` where the claim MGF overflows, ``nan`` where the value is undecidable."""
    if r == 0:
        return 0.0
    lam, c = model.claim_intensity, model.premium_rate
    if not r < dist.mgf_domain_sup(model.claims):
        return math.inf
    damp = dist.neg_exp_moment(model.funds, r)
    try:
        grow = dist.mgf(model.claims, r)
    except OverflowError:
        grow = math.inf
    if math.isinf(grow):
        # inf * 0 carries no sign information
        return math.inf if damp > 0 else math.nan
    return lam * (grow * damp - 1.0) - c * r


def _no_root(model: RiskModel) -> NoPositiveRootError:
    return NoPositiveRootError(
        f"net profit margin {net_profit_margin(model):g} <= 0: the adjustment equation "
        "has no positive solution and ruin is certain (psi(x) = 1)"
    )


def _bracket(model: RiskModel) -> tuple[float, float, list[tuple[float, float]]]:
    sup = dist.mgf_domain_sup(model.claims)
    grid: list[tuple[float, float]] = []
    lo = 0.0
    if math.isfinite(sup):
        limit = _BOUNDARY_FRACTION * sup
        for j in range(1, _MAX_EXPANSIONS):
            hi = min(sup * (1.0 - 0.5**j), limit)
            g = adjustment_function(model, hi)
            grid.append((hi, g))
            if g > 0:
                return lo, hi, grid
            if g < 0:
                lo = hi
            if hi >= limit:
                break
    else:
        hi = 1.0 / model.mean_claim
        for _ in range(_MAX_EXPANSIONS):
            g = adjustment_function(model, hi)
            grid.append((hi, g))
            if g > 0:
                return lo, hi, grid
            if math.isnan(g):
                break
            lo, hi = hi, 2.0 * hi
    raise BracketingError(
        f"could not bracket a positive root of the adjustment equation below {sup:g}", grid
    )


def adjustment_coefficient(model: RiskModel, tol: float = DEFAULT_TOL) -> AdjustmentResult:
    """Positive root of the adjustment equation, solved by bracketed bisection.

    Raises:
        NoPositiveRootError: the net profit condition fails.
        BracketingError: no sign change was found inside the MGF domain; the
            scanned ``(r, g(r))`` pairs are attached as ``grid``.
    """
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if net_profit_margin(model) <= 0:
        raise _no_root(model)

    lo, hi, _ = _bracket(model)
    bracket = (lo, hi)
    mid, g_mid = hi, adjustment_function(model, hi)
    for it in range(1, _MAX_BISECTIONS + 1):
        mid = 0.5 * (lo + hi)
        g_mid = adjustment_function(model, mid)
        if abs(g_mid) < tol:
            return AdjustmentResult(mid, bracket, g_mid, it)
        if g_mid > 0:
            hi = mid
        else:
            lo = mid
        if not lo < 0.5 * (lo + hi) < hi:
            # bracket collapsed to adjacent floats; near the MGF boundary the
            # slope of g can keep |g| above tol even at machine precision
            return AdjustmentResult(mid, bracket, g_mid, it)
    raise BracketingError(
        f"bisection stalled at r={mid!r} with |g|={abs(g_mid):.3g} above tolerance {tol:g}",
        [(mid, g_mid)],
    )


def exp_exp_adjustment_closed_form(model: RiskModel) -> float:
    """Positive root of the cubic that the adjustment equation becomes for exponential pairs."""
    if not model.is_exponential_pair:
        raise UnsupportedModelError(
            "the closed-form adjustment coefficient needs exponential claims and funds"
        )
    margin = net_profit_margin(model)
    if margin <= 0:
        raise _no_root(model)
    c, lam = model.premium_rate, model.claim_intensity
    mu1, mu2 = model.mean_claim, model.mean_funds
    b = lam * mu1 * mu2 + c * mu1 - c * mu2
    a = c * c * (mu1**2 + mu2**2) + (lam * mu1 * mu2) ** 2 + 2 * c * mu1 * mu2 * margin
    if b > 0:
        return 2.0 * margin / (b + math.sqrt(a))
    return -(b - math.sqrt(a)) / (2.0 * c * mu1 * mu2)


def lundberg_bound(r_hat: float, x: float) -> float:
    """Upper bound ``exp(-r_hat x)`` on the ruin probability."""
    if r_hat < 0 or x < 0:
        raise DomainError(f"bound needs r_hat >= 0 and x >= 0, got {r_hat}, {x}")
    return math.exp(-r_hat * x)


@dataclass(frozen=True)
class MartingaleCheck:
    mean: float
    stderr: float
    expected: float
    n: int

    @property
    def z_score(self) -> float:
        if self.stderr == 0:
            return 0.0 if self.mean == self.expected else math.inf
        return (self.mean - self.expected) / self.stderr


def martingale_expectation(model: RiskModel, r: float, t: float) -> float:
    """``E[exp(-r U_t)] = exp(t (lambda E[exp(r(xi - eta))] - lambda - c r))``."""
    return math.exp(t * adjustment_function(model, r))


def martingale_self_test(
    model: RiskModel, r_hat: float, t: float, n: int, stream: np.random.Generator
) -> MartingaleCheck:
    """Sample mean and standard error of ``exp(-r_hat U_t)`` over ``n`` paths.

    ``U_t = c t - sum_{i <= N_t} (xi_i - eta_i)``.  When ``r_hat`` solves the
    adjustment equation the true mean is exactly one.
    """
    if t <= 0 or n < 2:
        raise DomainError("self-test needs t > 0 and n >= 2")
    counts = stream.poisson(model.claim_intensity * t, size=n)
    total = int(counts.sum())
    net = dist.sample(model.claims, stream, total) - dist.sample(model.funds, stream, total)
    owner = np.repeat(np.arange(n), counts)
    sums = np.bincount(owner, weights=net, minlength=n)
    u = model.premium_rate * t - sums
    v = np.exp(-r_hat * u)
    mean = float(v.mean())
    stderr = float(v.std(ddof=1) / math.sqrt(n))
    return MartingaleCheck(mean, stderr, martingale_expectation(model, r_hat, t), n)
