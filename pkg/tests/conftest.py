import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from pbnpin import load_example  # noqa: E402

# feedback arc set used for the cell-cycle walkthrough, as (tail, head)
CELL_CYCLE_FAS = [(3, 1), (1, 4), (2, 4), (4, 4), (7, 4), (8, 4), (3, 5), (5, 5), (9, 6), (8, 8), (7, 9)]
CELL_CYCLE_TARGET = (1, 1, 1, 0, 0, 0, 1, 0, 0)


@pytest.fixture(scope="session")
def cell_cycle():
    return load_example("cell_cycle")


@pytest.fixture(scope="session")
def cell_cycle_fas():
    return list(CELL_CYCLE_FAS)
