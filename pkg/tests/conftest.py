"""Shared fixtures: the three-vertex reference instance and random instances.

t3 is small enough to reason about by hand and is reused everywhere:
vertices {0,1,2}, palette (r, b), edges (0,1)=+r, (1,2)=+b, (0,2)=minus.
Its optimum is 1 with exactly two optimal partitions.
"""

import numpy as np
import pytest

from chromclust.model import ChromaticInstance

# Populated by tests/test_acceptance.py; echoed after the run so the
# verdict for each numbered criterion is visible in one place.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture
def t3() -> ChromaticInstance:
    return ChromaticInstance.from_pair_labels(
        3, ("r", "b"), {(0, 1): 0, (1, 2): 1, (0, 2): -1}
    )


def random_instance(rng: np.random.Generator, n: int, n_colors: int) -> ChromaticInstance:
    """Uniform labels: minus or any positive color, equiprobable."""
    labels = rng.integers(-1, n_colors, size=n * (n - 1) // 2).astype(np.int16)
    return ChromaticInstance(
        n=n, colors=tuple(f"c{i}" for i in range(n_colors)), labels=labels
    )
