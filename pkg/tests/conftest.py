import numpy as np
import pytest

from evlot.grid import Layout, parse_layout

# Small lot with a door-fed road spine: EVSE (4,0) is cut off from the
# road network, EVSE (2,4) hangs off the branch near the door.
TWO_DOOR_LOT = """\
PPDDP
PRRRP
EPRRE
PPRPP
PPEPP
"""

# Single door, road spine with one branch, EVSEs at varying depth plus
# one unreachable; (1,1) and (3,1) are the spots cars tend to take next
# to the center EVSE (2,1).
BRANCHED_LOT = """\
PEDPP
PXRPP
PERRE
PXRPP
EPREP
"""


@pytest.fixture
def two_door_lot() -> Layout:
    return parse_layout(TWO_DOOR_LOT)


@pytest.fixture
def branched_lot() -> Layout:
    return parse_layout(BRANCHED_LOT.replace("X", "P"))


def random_layout(rng: np.random.Generator, height=None, width=None) -> Layout:
    """Arbitrary valid layout (doors forced onto the boundary); used by
    round-trip and reachability property tests."""
    h = height or int(rng.integers(1, 12))
    w = width or int(rng.integers(1, 12))
    cells = rng.integers(1, 4, size=(h, w)).astype(np.uint8)  # road/evse/parking
    n_doors = int(rng.integers(0, 4))
    for _ in range(n_doors):
        edge = int(rng.integers(4))
        if edge == 0:
            cells[0, rng.integers(w)] = 0
        elif edge == 1:
            cells[h - 1, rng.integers(w)] = 0
        elif edge == 2:
            cells[rng.integers(h), 0] = 0
        else:
            cells[rng.integers(h), w - 1] = 0
    return Layout(cells)
