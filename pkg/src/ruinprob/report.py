"""Comparison tables: simulation estimate vs De Vylder-type approximation vs bound."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from . import closed_form, devylder, lundberg, montecarlo
from .config import ModelConfig
from .dist import describe
from .errors import RuinModelError
from .model import net_profit_margin

CSV_COLUMNS = ("x", "psi_hat", "psi_dv", "dv_rel_pct", "lundberg", "bound_rel_pct")


@dataclass(frozen=True)
class ComparisonRow:
    x: float
    psi_hat: float | None
    psi_dv: float | None
    dv_rel_pct: float | None
    lundberg: float | None
    bound_rel_pct: float | None
    exact: float | None = None


@dataclass
class ComparisonTable:
    rows: list[ComparisonRow]
    header: dict[str, str] = field(default_factory=dict)
    has_exact: bool = False


def _rel_pct(value: float | None, reference: float | None) -> float | None:
    if value is None or reference is None or reference == 0:
        return None
    return (value / reference - 1.0) * 100.0


def build_table(
    cfg: ModelConfig,
    n_paths: int | None = None,
    seed: int | None = None,
    workers: int | None = 1,
) -> ComparisonTable:
    """Evaluate every method on ``cfg.x_grid``; inapplicable methods become ``None``."""
    model = cfg.model
    xs = list(cfg.x_grid)
    n_paths = cfg.mc.n_paths if n_paths is None else n_paths
    seed = cfg.mc.seed if seed is None else seed
    header: dict[str, str] = {
        "model": f"c={model.premium_rate:g} lambda={model.claim_intensity:g} "
        f"claims={describe(model.claims)} funds={describe(model.funds)}",
        "margin": f"{net_profit_margin(model):.6f}",
        "seed": str(seed),
        "n_paths": str(n_paths),
    }
    degenerate = net_profit_margin(model) <= 0

    if degenerate:
        bound = [1.0] * len(xs)
        header["r_hat"] = "n/a (net profit condition fails; psi(x) = 1)"
    else:
        try:
            adj = lundberg.adjustment_coefficient(model)
            bound = [lundberg.lundberg_bound(adj.r_hat, x) for x in xs]
            header["r_hat"] = f"{adj.r_hat:.6f}"
        except RuinModelError as exc:
            bound = [None] * len(xs)
            header["r_hat"] = f"n/a ({exc})"

    try:
        dv = devylder.devylder_psi(model)
        dv_values = [dv(x) for x in xs]
        header["psi_dv"] = str(dv)
        if not degenerate:
            p = devylder.devylder_params(model)
            header["dv_params"] = (
                f"c~={p.premium_rate:.6f} lambda~={p.claim_intensity:.6f} "
                f"mu1~={p.claim_mean:.6f} mu2~={p.funds_mean:.6f}"
            )
    except RuinModelError as exc:
        dv_values = [None] * len(xs)
        header["psi_dv"] = f"n/a ({exc})"

    exact_values: list[float | None] = [None] * len(xs)
    has_exact = model.is_exponential_pair
    if has_exact:
        ex = closed_form.exact_exponential_ruin(model)
        exact_values = [ex(x) for x in xs]
        header["exact"] = str(ex)

    if degenerate:
        truncation = None
        header["truncation"] = "n/a (no simulation needed)"
    else:
        truncation = cfg.mc.truncation(model, min(xs))
        header["truncation"] = _describe_truncation(truncation)
    sims = montecarlo.estimate_ruin_grid(model, xs, n_paths, seed, truncation, workers=workers)

    rows = []
    for x, sim, dv_x, b_x, ex_x in zip(xs, sims, dv_values, bound, exact_values):
        psi_hat = sim.psi_hat
        rows.append(
            ComparisonRow(
                x=x,
                psi_hat=psi_hat,
                psi_dv=dv_x,
                dv_rel_pct=_rel_pct(dv_x, psi_hat),
                lundberg=b_x,
                bound_rel_pct=_rel_pct(b_x, psi_hat),
                exact=ex_x,
            )
        )
    return ComparisonTable(rows, header, has_exact)


def _describe_truncation(t: montecarlo.Truncation) -> str:
    if isinstance(t, montecarlo.SurplusCap):
        return f"surplus cap {t.level:.6f}"
    return f"claim cap {t.max_claims}"


def _fmt(value: float | None, digits: int = 6) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def _fmt_x(x: float) -> str:
    return f"{x:g}"


def render_csv(table: ComparisonTable) -> str:
    buf = io.StringIO()
    for key, value in table.header.items():
        buf.write(f"# {key}: {value}\n")
    columns = list(CSV_COLUMNS) + (["exact"] if table.has_exact else [])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in table.rows:
        cells = [
            _fmt_x(row.x),
            _fmt(row.psi_hat),
            _fmt(row.psi_dv),
            _fmt(row.dv_rel_pct),
            _fmt(row.lundberg),
            _fmt(row.bound_rel_pct),
        ]
        if table.has_exact:
            cells.append(_fmt(row.exact))
        writer.writerow(cells)
    return buf.getvalue()


def _pct(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}%"


def render_markdown(table: ComparisonTable) -> str:
    lines = [f"<!-- {key}: {value} -->" for key, value in table.header.items()]
    head = ["x", "psi_hat(x)", "psi_DV(x)", "(psi_DV/psi_hat - 1)*100%", "exp(-R x)",
            "(exp(-R x)/psi_hat - 1)*100%"]
    if table.has_exact:
        head.append("psi(x) exact")
    lines.append("| " + " | ".join(head) + " |")
    lines.append("|" + "---|" * len(head))
    for row in table.rows:
        cells = [
            _fmt_x(row.x),
            _fmt(row.psi_hat),
            _fmt(row.psi_dv),
            _pct(row.dv_rel_pct),
            _fmt(row.lundberg),
            _pct(row.bound_rel_pct),
        ]
        if table.has_exact:
            cells.append(_fmt(row.exact))
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
