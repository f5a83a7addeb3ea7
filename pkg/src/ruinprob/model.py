"""Risk process with additional funds received at claim epochs.

The surplus evolves as ``X_t = x + c t - sum_{i <= N_t} (xi_i - eta_i)`` where
``N_t`` is Poisson with intensity ``lambda``, ``xi_i`` are claim sizes and
``eta_i`` the funds arriving with each claim.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from . import dist
from .dist import DistributionSpec, Exponential
from .errors import DomainError


class RiskModelWarning(UserWarning):
    """The model sits in a boundary case where ruin is trivial or classical."""


@dataclass(frozen=True)
class RiskModel:
    premium_rate: float
    claim_intensity: float
    claims: DistributionSpec
    funds: DistributionSpec

    def __post_init__(self) -> None:
        if not (self.premium_rate > 0 and math.isfinite(self.premium_rate)):
            raise DomainError(f"premium rate must be positive, got {self.premium_rate}")
        if not (self.claim_intensity > 0 and math.isfinite(self.claim_intensity)):
            raise DomainError(f"claim intensity must be positive, got {self.claim_intensity}")
        if not self.claims.mean > 0:
            raise DomainError("mean claim size must be positive")

        claims_lo, claims_hi = dist.support_bounds(self.claims)
        funds_lo, funds_hi = dist.support_bounds(self.funds)
        if claims_hi <= funds_lo:
            warnings.warn(
                "claims never exceed funds (P[xi - eta <= 0] = 1): ruin cannot occur",
                RiskModelWarning,
                stacklevel=3,
            )
        elif funds_hi <= claims_lo:
            warnings.warn(
                "funds never exceed claims (P[xi - eta >= 0] = 1): this is the classical model",
                RiskModelWarning,
                stacklevel=3,
            )

    @property
    def mean_claim(self) -> float:
        return self.claims.mean

    @property
    def mean_funds(self) -> float:
        return self.funds.mean

    @property
    def margin(self) -> float:
        return net_profit_margin(self)

    @property
    def is_exponential_pair(self) -> bool:
        return isinstance(self.claims, Exponential) and isinstance(self.funds, Exponential)

    @property
    def ruin_impossible(self) -> bool:
        """True when ``xi - eta <= 0`` almost surely."""
        return dist.support_bounds(self.claims)[1] <= dist.support_bounds(self.funds)[0]


@dataclass(frozen=True)
class MixedMoments:
    """Second and third raw moments of the net claim ``xi - eta``."""

    m2: float
    m3: float


def net_profit_margin(model: RiskModel) -> float:
    """``c - lambda*mu1 + lambda*mu2``; ruin is certain when this is not positive."""
    lam = model.claim_intensity
    return model.premium_rate - lam * model.mean_claim + lam * model.mean_funds


def mixed_moments(model: RiskModel) -> MixedMoments:
    a1, a2, a3 = (dist.raw_moment(model.claims, k) for k in (1, 2, 3))
    b1, b2, b3 = (dist.raw_moment(model.funds, k) for k in (1, 2, 3))
    m2 = a2 - 2.0 * a1 * b1 + b2
    m3 = a3 - 3.0 * a2 * b1 + 3.0 * a1 * b2 - b3
    return MixedMoments(m2=m2, m3=m3)
