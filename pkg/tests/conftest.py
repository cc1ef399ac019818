import numpy as np
import pytest

from evdmm import Partition

ACCEPTANCE_LINES: list[str] = []


def random_partition(rng: np.random.Generator, d: int, p: int | None = None) -> Partition:
    if p is None:
        p = int(rng.integers(1, d + 1))
    perm = rng.permutation(d)
    cuts = np.sort(rng.choice(np.arange(1, d), size=p - 1, replace=False)) if p > 1 else []
    return Partition([sorted(b.tolist()) for b in np.split(perm, cuts)], d)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
