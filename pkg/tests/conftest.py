import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from graphon_sba import GraphSampleSet  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def constant_samples(value: int, n: int = 6, two_t: int = 2, directed: bool = True) -> GraphSampleSet:
    obs = np.full((two_t, n, n), value, dtype=np.uint8)
    return GraphSampleSet(np.linspace(0, 1, n), obs, None, directed)


def two_group_samples(sizes, two_t=2):
    """Deterministic diagonal 2-group graph: edges exactly within groups."""
    groups = np.repeat(np.arange(len(sizes)), sizes)
    adj = (groups[:, None] == groups[None, :]).astype(np.uint8)
    labels = np.where(groups == 0, 0.25, 0.75)
    return GraphSampleSet(labels, np.stack([adj] * two_t), None, True), groups
