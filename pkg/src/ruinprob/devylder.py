"""De Vylder-type approximation for the risk model with additional funds.

The model is replaced by one with exponential claims and exponential funds
whose net outflow process has the same first three moments, with the extra
constraint that the claim/fund mean ratio is preserved.  The surrogate's exact
ruin function is the approximation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .closed_form import RuinFunction, exponential_pair_ruin
from .dist import Degenerate, Exponential
from .errors import ApproximationInapplicableError
from .model import RiskModel, mixed_moments, net_profit_margin


@dataclass(frozen=True)
class SurrogateParams:
    premium_rate: float
    claim_intensity: float
    claim_mean: float
    funds_mean: float

    def as_model(self) -> RiskModel:
        # funds_mean == 0 only arises from the classical (no funds) limit
        funds = Exponential(self.funds_mean) if self.funds_mean > 0 else Degenerate(0.0)
        return RiskModel(self.premium_rate, self.claim_intensity, Exponential(self.claim_mean), funds)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.premium_rate, self.claim_intensity, self.claim_mean, self.funds_mean)


def devylder_params(model: RiskModel) -> SurrogateParams:
    """Surrogate ``(c~, lambda~, mu1~, mu2~)`` matching three moments of ``U_t``.

    Raises:
        ApproximationInapplicableError: the net profit condition fails, the
            means coincide, or one of the two positivity gates is violated.
            ``gate`` is one of ``"net-profit"``, ``"mean-ratio"``,
            ``"means-positive"``, ``"premium-positive"``.
    """
    c, lam = model.premium_rate, model.claim_intensity
    mu1, mu2 = model.mean_claim, model.mean_funds
    if net_profit_margin(model) <= 0:
        raise ApproximationInapplicableError(
            "net profit condition fails; ruin is certain", gate="net-profit"
        )
    if mu1 == mu2:
        raise ApproximationInapplicableError(
            "equal claim and fund means make the moment system degenerate", gate="mean-ratio"
        )
    mm = mixed_moments(model)
    quad = mu1 * mu1 - mu1 * mu2 + mu2 * mu2
    cubic = mu1**3 - mu1 * mu1 * mu2 + mu1 * mu2 * mu2 - mu2**3
    if not cubic * mm.m3 > 0:
        raise ApproximationInapplicableError(
            f"gate (mu1^3 - mu1^2 mu2 + mu1 mu2^2 - mu2^3) * E[(xi-eta)^3] = "
            f"{cubic * mm.m3:.6g} is not positive",
            gate="means-positive",
        )
    scale = quad * mm.m3 / (3.0 * cubic * mm.m2)
    claim_mean = mu1 * scale
    funds_mean = mu2 * scale
    intensity = 9.0 * lam * cubic**2 * mm.m2**3 / (2.0 * quad**3 * mm.m3**2)
    premium = c - lam * (mu1 - mu2) * (1.0 - 3.0 * cubic * mm.m2**2 / (2.0 * quad**2 * mm.m3))
    if not premium > 0:
        raise ApproximationInapplicableError(
            f"surrogate premium rate {premium:.6g} is not positive", gate="premium-positive"
        )
    return SurrogateParams(premium, intensity, claim_mean, funds_mean)


def devylder_psi(model: RiskModel) -> RuinFunction:
    """Approximate ruin function; ``psi == 1`` when the net profit condition fails."""
    if net_profit_margin(model) <= 0:
        return RuinFunction.certain_ruin()
    return exponential_pair_ruin(*devylder_params(model).as_tuple())
