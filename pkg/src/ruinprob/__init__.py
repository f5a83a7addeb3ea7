"""Ruin probabilities for a compound-Poisson risk model with additional funds.

Claims ``xi_i`` and funds ``eta_i`` both arrive at the epochs of a Poisson
process; premiums accrue at rate ``c``.  The package provides the exact ruin
function for exponential claims and funds, the exponential upper bound from
the adjustment coefficient, a De Vylder-type three-moment approximation and
Monte Carlo estimates with Hoeffding sample-size planning.
"""

from .closed_form import RuinFunction, evaluate, exact_exponential_ruin
from .devylder import SurrogateParams, devylder_params, devylder_psi
from .dist import (
    Degenerate,
    DistributionSpec,
    Erlang,
    Exponential,
    Hyperexponential,
    mgf,
    mgf_domain_sup,
    neg_exp_moment,
    raw_moment,
    sample,
)
from .errors import (
    ApproximationInapplicableError,
    BracketingError,
    DomainError,
    NoPositiveRootError,
    RuinModelError,
    UnsupportedModelError,
)
from .lundberg import (
    AdjustmentResult,
    adjustment_coefficient,
    exp_exp_adjustment_closed_form,
    lundberg_bound,
    martingale_self_test,
)
from .model import MixedMoments, RiskModel, mixed_moments, net_profit_margin
from .montecarlo import (
    ClaimCap,
    SimPlan,
    SimResult,
    SurplusCap,
    estimate_ruin,
    estimate_ruin_grid,
    hoeffding_n,
    simulate_path,
)

__version__ = "0.1.0"
