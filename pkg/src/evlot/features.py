"""EVSE neighborhood featurization for the usage-prediction models.

Each EVSE becomes a flat binary vector: an m x m window centered on it,
one-hot over five channels [road, parking, EVSE, door, off-grid] in
row-major (row, col, channel) order, optionally followed by the road-path
distance to the nearest door.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .grid import CellType, Layout

N_CHANNELS = 5
CHANNEL_OF = {
    CellType.ROAD: 0,
    CellType.PARKING: 1,
    CellType.EVSE: 2,
    CellType.DOOR: 3,
}
OFF_GRID_CHANNEL = 4


@dataclass(frozen=True)
class FeatureConfig:
    m: int = 9
    include_door_distance: bool = False
    normalize_distance: bool = False

    def __post_init__(self):
        if self.m < 1 or self.m % 2 == 0:
            raise ValueError("neighborhood side m must be odd and >= 1")

    @property
    def vector_length(self) -> int:
        return self.m * self.m * N_CHANNELS + (1 if self.include_door_distance else 0)


def unreachable_sentinel(layout: Layout) -> float:
    """Door distance stand-in for EVSEs cut off from the road network."""
    return 2.0 * (layout.height + layout.width)


def door_distance_map(layout: Layout) -> np.ndarray:
    """BFS distance from the nearest door over road/door cells, plus one
    step onto each adjacent EVSE. Unreachable EVSEs get the sentinel."""
    dist = np.full((layout.height, layout.width), np.inf)
    queue = deque()
    for r, c in layout.door_cells():
        dist[r, c] = 0.0
        queue.append((r, c))
    while queue:
        r, c = queue.popleft()
        for nr, nc in layout.neighbors(r, c):
            if layout.cell(nr, nc) in (CellType.ROAD, CellType.DOOR) and dist[nr, nc] == np.inf:
                dist[nr, nc] = dist[r, c] + 1
                queue.append((nr, nc))
    out = np.full_like(dist, np.inf)
    for r, c in layout.evse_cells():
        best = min(
            (dist[nr, nc] for nr, nc in layout.neighbors(r, c)),
            default=np.inf,
        )
        out[r, c] = best + 1 if np.isfinite(best) else unreachable_sentinel(layout)
    return out


def door_distance(layout: Layout, evse, normalize: bool = False) -> float:
    """Shortest road-path distance from one EVSE to any door."""
    r, c = evse
    if layout.cell(r, c) != CellType.EVSE:
        raise ValueError(f"cell {evse} is not an EVSE")
    d = float(door_distance_map(layout)[r, c])
    return d / (layout.height + layout.width) if normalize else d


def extract_features(layout: Layout, evse, config: FeatureConfig,
                     distance_map: np.ndarray = None) -> np.ndarray:
    """Flatten the m x m one-hot window around `evse` (plus optional d_door)."""
    r0, c0 = evse
    if not layout.in_grid(r0, c0):
        raise ValueError(f"cell {evse} is outside the grid")
    if layout.cell(r0, c0) != CellType.EVSE:
        raise ValueError(f"cell {evse} is not an EVSE")
    half = config.m // 2
    window = np.zeros((config.m, config.m, N_CHANNELS))
    for i in range(config.m):
        for j in range(config.m):
            r, c = r0 - half + i, c0 - half + j
            if layout.in_grid(r, c):
                window[i, j, CHANNEL_OF[layout.cell(r, c)]] = 1.0
            else:
                window[i, j, OFF_GRID_CHANNEL] = 1.0
    vec = window.reshape(-1)
    if config.include_door_distance:
        if distance_map is None:
            distance_map = door_distance_map(layout)
        d = float(distance_map[r0, c0])
        if config.normalize_distance:
            d /= layout.height + layout.width
        vec = np.concatenate([vec, [d]])
    return vec
