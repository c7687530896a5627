import numpy as np
import pytest

from gpe2d import make_grid


@pytest.fixture
def grid128():
    return make_grid(-8, 8, -8, 8, 128, 128)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_values(rng, grid):
    return rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(RESULTS, key=lambda c: int(c.rstrip("ab").lstrip("C"))):
        ok, detail = RESULTS[cid]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {cid}  {detail}")
