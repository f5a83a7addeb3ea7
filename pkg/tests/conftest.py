from pathlib import Path

import numpy as np
import pytest

from ruinprob import Degenerate, Erlang, Exponential, Hyperexponential, RiskModel

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

ACCEPTANCE_LINES: list[str] = []


def erlang_model() -> RiskModel:
    return RiskModel(10.0, 4.0, Erlang(3, 2.0), Erlang(2, 0.5))


def hyper_model() -> RiskModel:
    return RiskModel(
        10.0,
        4.0,
        Hyperexponential(((0.4, 0.5), (0.3, 2.0), (0.3, 4.0))),
        Hyperexponential(((0.75, 0.4), (0.25, 0.8))),
    )


def exp_degenerate_model() -> RiskModel:
    return RiskModel(10.0, 4.0, Exponential(2.0), Degenerate(0.5))


def exp_exp_model(c=10.0, lam=4.0, mu1=2.0, mu2=0.5) -> RiskModel:
    return RiskModel(c, lam, Exponential(mu1), Exponential(mu2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=["erlang", "hyper", "exp_degenerate"])
def example_model(request):
    return {"erlang": erlang_model, "hyper": hyper_model, "exp_degenerate": exp_degenerate_model}[
        request.param
    ]()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
