"""Light-tailed distribution families for claim sizes and additional funds.

Every family is an immutable dataclass exposing closed-form raw moments (orders
1-3), the moment generating function on its open domain, the Laplace
transform ``E[exp(-rY)]`` and samplers.  The module-level functions mirror the
methods so callers can work with any :data:`DistributionSpec` uniformly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from .errors import DomainError

WEIGHT_SUM_TOL = 1e-12


def _check_order(order: int) -> None:
    if order not in (1, 2, 3):
        raise DomainError(f"raw moments are provided for orders 1, 2, 3 only, got {order}")


def _check_mgf_arg(r: float, sup: float) -> None:
    if r < 0:
        raise DomainError(f"mgf argument must be nonnegative, got {r}")
    if not r < sup:
        raise DomainError(f"mgf argument {r} is outside the open domain [0, {sup})")


@dataclass(frozen=True)
class Exponential:
    mean: float

    def __post_init__(self) -> None:
        if not (self.mean > 0 and math.isfinite(self.mean)):
            raise DomainError(f"exponential mean must be positive and finite, got {self.mean}")

    def raw_moment(self, order: int) -> float:
        _check_order(order)
        return math.factorial(order) * self.mean**order

    def mgf_domain_sup(self) -> float:
        return 1.0 / self.mean

    def mgf(self, r: float) -> float:
        _check_mgf_arg(r, self.mgf_domain_sup())
        return 1.0 / (1.0 - self.mean * r)

    def neg_exp_moment(self, r: float) -> float:
        return 1.0 / (1.0 + self.mean * r)

    def sample(self, rng: np.random.Generator, size: int | tuple[int, ...] | None = None):
        return self.mean * rng.standard_exponential(size)


@dataclass(frozen=True)
class Erlang:
    """Erlang law with integer ``shape`` and the given ``mean`` (rate ``shape/mean``)."""

    shape: int
    mean: float

    def __post_init__(self) -> None:
        if isinstance(self.shape, bool) or int(self.shape) != self.shape or self.shape < 1:
            raise DomainError(f"Erlang shape must be a positive integer, got {self.shape}")
        object.__setattr__(self, "shape", int(self.shape))
        if not (self.mean > 0 and math.isfinite(self.mean)):
            raise DomainError(f"Erlang mean must be positive and finite, got {self.mean}")

    def raw_moment(self, order: int) -> float:
        _check_order(order)
        k, mu = self.shape, self.mean
        # E[Y^n] = k(k+1)...(k+n-1) (mu/k)^n
        rising = math.prod(range(k, k + order))
        return rising * (mu / k) ** order

    def mgf_domain_sup(self) -> float:
        return self.shape / self.mean

    def mgf(self, r: float) -> float:
        _check_mgf_arg(r, self.mgf_domain_sup())
        k = self.shape
        return (k / (k - self.mean * r)) ** k

    def neg_exp_moment(self, r: float) -> float:
        k = self.shape
        return (k / (k + self.mean * r)) ** k

    def sample(self, rng: np.random.Generator, size: int | tuple[int, ...] | None = None):
        # Sum of k unit exponentials; exact and adequate for moderate k.
        scale = self.mean / self.shape
        if size is None:
            return scale * float(rng.standard_exponential(self.shape).sum())
        shape = (size,) if isinstance(size, int) else tuple(size)
        return scale * rng.standard_exponential(shape + (self.shape,)).sum(axis=-1)


@dataclass(frozen=True)
class Hyperexponential:
    """Finite mixture of exponentials given as ``(weight, mean)`` pairs."""

    components: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        comps = tuple((float(w), float(m)) for w, m in self.components)
        if not comps:
            raise DomainError("hyperexponential needs at least one component")
        for w, m in comps:
            if not w > 0:
                raise DomainError(f"hyperexponential weights must be positive, got {w}")
            if not (m > 0 and math.isfinite(m)):
                raise DomainError(f"hyperexponential component means must be positive, got {m}")
        total = math.fsum(w for w, _ in comps)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise DomainError(f"hyperexponential weights must sum to 1, got {total!r}")
        object.__setattr__(self, "components", comps)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.components)

    @property
    def means(self) -> tuple[float, ...]:
        return tuple(m for _, m in self.components)

    @property
    def mean(self) -> float:
        return math.fsum(w * m for w, m in self.components)

    def raw_moment(self, order: int) -> float:
        _check_order(order)
        n_fact = math.factorial(order)
        return math.fsum(n_fact * w * m**order for w, m in self.components)

    def mgf_domain_sup(self) -> float:
        return 1.0 / max(self.means)

    def mgf(self, r: float) -> float:
        _check_mgf_arg(r, self.mgf_domain_sup())
        return math.fsum(w / (1.0 - m * r) for w, m in self.components)

    def neg_exp_moment(self, r: float) -> float:
        return math.fsum(w / (1.0 + m * r) for w, m in self.components)

    def sample(self, rng: np.random.Generator, size: int | tuple[int, ...] | None = None):
        cum = np.cumsum(self.weights)[:-1]
        means = np.asarray(self.means)
        idx = np.searchsorted(cum, rng.random(size), side="right")
        draw = means[idx] * rng.standard_exponential(size)
        return float(draw) if size is None else draw


@dataclass(frozen=True)
class Degenerate:
    """Point mass at ``point``."""

    point: float

    def __post_init__(self) -> None:
        if not (self.point >= 0 and math.isfinite(self.point)):
            raise DomainError(f"degenerate point must be nonnegative and finite, got {self.point}")

    @property
    def mean(self) -> float:
        return self.point

    def raw_moment(self, order: int) -> float:
        _check_order(order)
        return self.point**order

    def mgf_domain_sup(self) -> float:
        return math.inf

    def mgf(self, r: float) -> float:
        _check_mgf_arg(r, math.inf)
        return math.exp(self.point * r)

    def neg_exp_moment(self, r: float) -> float:
        return math.exp(-self.point * r)

    def sample(self, rng: np.random.Generator, size: int | tuple[int, ...] | None = None):
        if size is None:
            return self.point
        return np.full(size, self.point, dtype=float)


DistributionSpec = Union[Exponential, Erlang, Hyperexponential, Degenerate]


def raw_moment(spec: DistributionSpec, order: int) -> float:
    return spec.raw_moment(order)


def mean(spec: DistributionSpec) -> float:
    return spec.mean


def mgf(spec: DistributionSpec, r: float) -> float:
    """``E[exp(rY)]`` for ``0 <= r < mgf_domain_sup(spec)``."""
    return spec.mgf(r)


def mgf_domain_sup(spec: DistributionSpec) -> float:
    return spec.mgf_domain_sup()


def neg_exp_moment(spec: DistributionSpec, r: float) -> float:
    """``E[exp(-rY)]`` for ``r >= 0``; always in ``(0, 1]``."""
    if r < 0:
        raise DomainError(f"negative-exponential moment needs r >= 0, got {r}")
    return spec.neg_exp_moment(r)


def sample(spec: DistributionSpec, stream: np.random.Generator, size=None):
    """One draw (``size=None``) or an array of draws from ``spec``."""
    return spec.sample(stream, size)


def support_bounds(spec: DistributionSpec) -> tuple[float, float]:
    """Essential infimum and supremum of the support."""
    if isinstance(spec, Degenerate):
        return spec.point, spec.point
    return 0.0, math.inf


def spec_to_dict(spec: DistributionSpec) -> dict[str, Any]:
    if isinstance(spec, Exponential):
        return {"family": "exponential", "mean": spec.mean}
    if isinstance(spec, Erlang):
        return {"family": "erlang", "shape": spec.shape, "mean": spec.mean}
    if isinstance(spec, Hyperexponential):
        return {
            "family": "hyperexponential",
            "components": [{"weight": w, "mean": m} for w, m in spec.components],
        }
    if isinstance(spec, Degenerate):
        return {"family": "degenerate", "point": spec.point}
    raise TypeError(f"not a distribution spec: {spec!r}")


def spec_from_dict(data: dict[str, Any]) -> DistributionSpec:
    """Build a spec from its JSON descriptor (see ``spec_to_dict``)."""
    if not isinstance(data, dict) or "family" not in data:
        raise DomainError(f"distribution descriptor needs a 'family' key, got {data!r}")
    family = str(data["family"]).lower()
    try:
        if family == "exponential":
            return Exponential(float(data["mean"]))
        if family == "erlang":
            return Erlang(data["shape"], float(data["mean"]))
        if family == "hyperexponential":
            comps = tuple((float(c["weight"]), float(c["mean"])) for c in data["components"])
            return Hyperexponential(comps)
        if family == "degenerate":
            return Degenerate(float(data["point"]))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed {family} descriptor {data!r}: missing or bad {exc}") from exc
    raise DomainError(f"unknown distribution family {data['family']!r}")


def describe(spec: DistributionSpec) -> str:
    if isinstance(spec, Exponential):
        return f"Exponential(mean={spec.mean:g})"
    if isinstance(spec, Erlang):
        return f"Erlang(shape={spec.shape}, mean={spec.mean:g})"
    if isinstance(spec, Hyperexponential):
        inner = ", ".join(f"({w:g}, {m:g})" for w, m in spec.components)
        return f"Hyperexponential[{inner}]"
    return f"Degenerate(point={spec.point:g})"
