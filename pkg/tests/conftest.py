from functools import lru_cache

import numpy as np
import pytest

from nsit.gellmann import build_basis

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def basis_for(n):
    return build_basis(n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
