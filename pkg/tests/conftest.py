"""Independent numerical oracles used across the test modules."""

import math

import numpy as np
import pytest
from scipy import integrate


def erf_series(x: float, terms: int = 80) -> float:
    """Maclaurin series of erf; converges fast for |x| <= 3."""
    total = 0.0
    for n in range(terms):
        total += (-1) ** n * x ** (2 * n + 1) / (math.factorial(n) * (2 * n + 1))
    return 2.0 / math.sqrt(math.pi) * total


def overlap_fidelity(R: float) -> float:
    """Brute-force F for two unit-sigma Gaussians separated by sqrt(R).

    The threshold sits midway; F is one minus the mean misassignment, each
    tail integrated numerically rather than via erf.
    """
    half = math.sqrt(R) / 2.0
    pdf = lambda x: math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)  # noqa: E731
    tail, _ = integrate.quad(pdf, half, np.inf, epsabs=1e-14, epsrel=1e-13)
    return 1.0 - tail


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_criterion_order):
            terminalreporter.write_line(line)


def _criterion_order(line: str):
    tag = line.split("]")[0].split()[-1]
    digits = "".join(ch for ch in tag if ch.isdigit())
    return int(digits), tag


@pytest.fixture(autouse=True)
def _isolate_fixture_dir(monkeypatch):
    monkeypatch.delenv("TMSREADOUT_FIXTURE_DIR", raising=False)
