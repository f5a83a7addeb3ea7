"""Exact ruin probability when claims and funds are both exponential."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnsupportedModelError
from .model import RiskModel, net_profit_margin


@dataclass(frozen=True)
class RuinFunction:
    """``psi(x) = coefficient * exp(rate * x)``.

    ``degenerate`` marks the constant function ``psi == 1`` returned when the
    net profit condition fails; it is the only instance allowed ``rate == 0``.
    """

    coefficient: float
    rate: float
    degenerate: bool = False

    def __post_init__(self) -> None:
        if self.degenerate:
            if self.coefficient != 1.0 or self.rate != 0.0:
                raise DomainError("the degenerate ruin function is psi == 1")
            return
        if not self.rate < 0:
            raise DomainError(f"ruin function rate must be negative, got {self.rate}")
        if not 0 < self.coefficient <= 1:
            raise DomainError(f"ruin function coefficient must lie in (0, 1], got {self.coefficient}")

    @classmethod
    def certain_ruin(cls) -> RuinFunction:
        return cls(1.0, 0.0, degenerate=True)

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def __str__(self) -> str:
        if self.degenerate:
            return "1"
        return f"{self.coefficient:.6f} * exp({self.rate:.6f} x)"


def evaluate(rf: RuinFunction, x: float) -> float:
    if x < 0:
        raise DomainError(f"initial surplus must be nonnegative, got {x}")
    value = rf.coefficient * math.exp(rf.rate * x)
    assert 0.0 <= value <= 1.0, value
    return value


def exponential_pair_ruin(c: float, lam: float, mu1: float, mu2: float) -> RuinFunction:
    """Ruin function for exponential claims (mean ``mu1``) and funds (mean ``mu2``).

    ``mu2 == 0`` is accepted and yields the classical ``(lam*mu1/c) exp(-(c - lam*mu1) x / (c*mu1))``.
    """
    margin = c - lam * mu1 + lam * mu2
    if margin <= 0:
        return RuinFunction.certain_ruin()
    b = lam * mu1 * mu2 + c * mu1 - c * mu2
    disc = c * c * (mu1 * mu1 + mu2 * mu2) + (lam * mu1 * mu2) ** 2 + 2 * c * mu1 * mu2 * margin
    root = math.sqrt(disc)
    if b > 0:
        # (b - root)(b + root) = b^2 - disc = -4 c mu1 mu2 margin
        alpha = -2.0 * margin / (b + root)
    else:
        alpha = (b - root) / (2.0 * c * mu1 * mu2)
    one_minus = 1.0 - alpha * mu2
    multiplier = lam * mu1 * one_minus / ((c * alpha - lam) * one_minus * (mu1 + mu2) + lam * mu2)
    return RuinFunction(coefficient=-multiplier, rate=alpha)


def exact_exponential_ruin(model: RiskModel) -> RuinFunction:
    """Exact ``psi`` for the exponential/exponential model; ``psi == 1`` without profit."""
    if not model.is_exponential_pair:
        raise UnsupportedModelError(
            "the exact solution requires exponential claims and exponential funds"
        )
    if net_profit_margin(model) <= 0:
        return RuinFunction.certain_ruin()
    return exponential_pair_ruin(
        model.premium_rate, model.claim_intensity, model.mean_claim, model.mean_funds
    )
