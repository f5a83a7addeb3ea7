"""JSON model configuration used by the command-line tools.

Schema (all keys except ``x_grid``, ``mc`` and ``name`` are required)::

    {
      "name": "erlang",
      "premium_rate": 10,
      "claim_intensity": 4,
      "claims": {"family": "erlang", "shape": 3, "mean": 2},
      "funds":  {"family": "erlang", "shape": 2, "mean": 0.5},
      "x_grid": [0, 1, 2, 5, 10],
      "mc": {"epsilon": 0.001, "delta": 0.001, "seed": 20150202,
             "paths": null, "surplus_cap": null, "max_claims": null,
             "cap_tolerance": 1e-6}
    }

Distribution descriptors use ``family`` in ``exponential`` (``mean``),
``erlang`` (``shape``, ``mean``), ``hyperexponential`` (``components``: list of
``{"weight", "mean"}``) and ``degenerate`` (``point``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .dist import DistributionSpec, spec_from_dict, spec_to_dict
from .errors import RuinModelError
from .model import RiskModel
from .montecarlo import (
    DEFAULT_CAP_TOLERANCE,
    ClaimCap,
    SurplusCap,
    Truncation,
    default_truncation,
    hoeffding_n,
)

DEFAULT_SEED = 20150202
DEFAULT_X_GRID = (0.0, 1.0, 2.0, 5.0, 10.0)

_TOP_KEYS = {"name", "premium_rate", "claim_intensity", "claims", "funds", "x_grid", "mc"}
_MC_KEYS = {"epsilon", "delta", "seed", "paths", "surplus_cap", "max_claims", "cap_tolerance"}


class ConfigError(RuinModelError):
    """The configuration file is unreadable or does not describe a valid model."""


@dataclass(frozen=True)
class MCSettings:
    epsilon: float = 0.001
    delta: float = 0.001
    seed: int = DEFAULT_SEED
    paths: int | None = None
    surplus_cap: float | None = None
    max_claims: int | None = None
    cap_tolerance: float = DEFAULT_CAP_TOLERANCE

    @property
    def n_paths(self) -> int:
        if self.paths is not None:
            return self.paths
        return max(1, hoeffding_n(self.epsilon, self.delta))

    def truncation(self, model: RiskModel, x_lo: float = 0.0) -> Truncation:
        if self.surplus_cap is not None:
            return SurplusCap(self.surplus_cap)
        if self.max_claims is not None:
            return ClaimCap(self.max_claims)
        return default_truncation(model, x_lo, self.cap_tolerance)


@dataclass(frozen=True)
class ModelConfig:
    premium_rate: float
    claim_intensity: float
    claims: DistributionSpec
    funds: DistributionSpec
    x_grid: tuple[float, ...] = DEFAULT_X_GRID
    mc: MCSettings = field(default_factory=MCSettings)
    name: str = ""

    @property
    def model(self) -> RiskModel:
        return RiskModel(self.premium_rate, self.claim_intensity, self.claims, self.funds)


def _number(data: dict, key: str, where: str) -> float:
    try:
        value = data[key]
    except KeyError:
        raise ConfigError(f"{where}: missing required key {key!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: {key!r} must be a number, got {value!r}")
    return float(value)


def _optional_int(data: dict, key: str) -> int | None:
    value = data.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"mc: {key!r} must be a positive integer, got {value!r}")
    return value


def _parse_mc(data: Any) -> MCSettings:
    if data is None:
        return MCSettings()
    if not isinstance(data, dict):
        raise ConfigError(f"mc: expected an object, got {data!r}")
    unknown = set(data) - _MC_KEYS
    if unknown:
        raise ConfigError(f"mc: unknown keys {sorted(unknown)}")
    defaults = MCSettings()
    epsilon = _number(data, "epsilon", "mc") if "epsilon" in data else defaults.epsilon
    delta = _number(data, "delta", "mc") if "delta" in data else defaults.delta
    if not epsilon > 0 or not delta > 0:
        raise ConfigError("mc: epsilon and delta must be positive")
    seed = data.get("seed", defaults.seed)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(f"mc: seed must be an unsigned 64-bit integer, got {seed!r}")
    cap = data.get("surplus_cap")
    if cap is not None:
        cap = _number(data, "surplus_cap", "mc")
        if not (cap > 0 and math.isfinite(cap)):
            raise ConfigError("mc: surplus_cap must be positive")
    tol = _number(data, "cap_tolerance", "mc") if "cap_tolerance" in data else defaults.cap_tolerance
    if not 0 < tol < 1:
        raise ConfigError("mc: cap_tolerance must lie in (0, 1)")
    max_claims = _optional_int(data, "max_claims")
    if cap is not None and max_claims is not None:
        raise ConfigError("mc: give at most one of surplus_cap and max_claims")
    return MCSettings(epsilon, delta, seed, _optional_int(data, "paths"), cap, max_claims, tol)


def parse_config(data: Any) -> ModelConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    c = _number(data, "premium_rate", "config")
    lam = _number(data, "claim_intensity", "config")
    try:
        claims = spec_from_dict(data.get("claims"))
        funds = spec_from_dict(data.get("funds"))
    except RuinModelError as exc:
        raise ConfigError(str(exc)) from exc

    grid = data.get("x_grid", list(DEFAULT_X_GRID))
    if not isinstance(grid, list) or not grid:
        raise ConfigError("x_grid must be a nonempty list")
    if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in grid):
        raise ConfigError("x_grid entries must be numbers")
    x_grid = tuple(float(x) for x in grid)
    if x_grid[0] < 0 or any(b < a for a, b in zip(x_grid, x_grid[1:])):
        raise ConfigError("x_grid must be nonnegative and sorted ascending")

    name = data.get("name", "")
    if not isinstance(name, str):
        raise ConfigError("name must be a string")
    cfg = ModelConfig(c, lam, claims, funds, x_grid, _parse_mc(data.get("mc")), name)
    try:
        cfg.model
    except RuinModelError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def load_config(path: str | Path) -> ModelConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data)


def config_to_dict(cfg: ModelConfig) -> dict[str, Any]:
    mc = cfg.mc
    out: dict[str, Any] = {}
    if cfg.name:
        out["name"] = cfg.name
    out.update(
        premium_rate=cfg.premium_rate,
        claim_intensity=cfg.claim_intensity,
        claims=spec_to_dict(cfg.claims),
        funds=spec_to_dict(cfg.funds),
        x_grid=list(cfg.x_grid),
        mc={
            "epsilon": mc.epsilon,
            "delta": mc.delta,
            "seed": mc.seed,
            "paths": mc.paths,
            "surplus_cap": mc.surplus_cap,
            "max_claims": mc.max_claims,
            "cap_tolerance": mc.cap_tolerance,
        },
    )
    return out


def dump_config(cfg: ModelConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"
