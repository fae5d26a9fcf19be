"""Procedural parking-lot generation: doors on the boundary, roads grown
outward as a branching tree, EVSEs sprinkled on the leftover cells."""

from dataclasses import dataclass

import numpy as np

from .grid import CellType, Layout, reachable_evses

UNASSIGNED = 255

# direction vectors keyed N/E/S/W
DIRS = {"N": (-1, 0), "E": (0, 1), "S": (1, 0), "W": (0, -1)}
LEFT_OF = {"N": "W", "W": "S", "S": "E", "E": "N"}
RIGHT_OF = {"N": "E", "E": "S", "S": "W", "W": "N"}


@dataclass(frozen=True)
class LotGenConfig:
    height: int
    width: int
    n_evses: int
    p_door: float = 0.05
    p_split0: float = 0.15
    split_decay: float = 0.5
    halt_slope: float = 0.02
    halt_cap: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValueError("grid dimensions must be positive")
        if not 0 < self.n_evses < self.height * self.width:
            raise ValueError("n_evses must be in (0, height*width)")
        for name in ("p_door", "p_split0", "split_decay", "halt_slope", "halt_cap"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.halt_cap >= 1:
            raise ValueError("halt_cap must be < 1")


@dataclass
class ActiveRoad:
    head: tuple  # (row, col)
    direction: str
    length: int = 0


def boundary_cells(height: int, width: int) -> list:
    cells = []
    for c in range(width):
        cells.append((0, c))
    for r in range(1, height):
        cells.append((r, width - 1))
    if height > 1:
        for c in range(width - 2, -1, -1):
            cells.append((height - 1, c))
    if width > 1:
        for r in range(height - 2, 0, -1):
            cells.append((r, 0))
    return cells


def _ingrid_directions(cell, height, width):
    r, c = cell
    out = []
    for name, (dr, dc) in DIRS.items():
        if 0 <= r + dr < height and 0 <= c + dc < width:
            out.append(name)
    return out


def _grow(config: LotGenConfig, rng: np.random.Generator):
    h, w = config.height, config.width
    grid = np.full((h, w), UNASSIGNED, dtype=np.uint8)

    border = boundary_cells(h, w)
    doors = [cell for cell in border if rng.random() < config.p_door]
    if not doors:
        doors = [border[rng.integers(len(border))]]
    for r, c in doors:
        grid[r, c] = int(CellType.DOOR)

    active = []
    for cell in doors:
        dirs = _ingrid_directions(cell, h, w)
        active.append(ActiveRoad(head=cell, direction=dirs[rng.integers(len(dirs))]))

    splits = 0
    while active:
        next_active = []
        for road in active:
            dr, dc = DIRS[road.direction]
            nr, nc = road.head[0] + dr, road.head[1] + dc
            if not (0 <= nr < h and 0 <= nc < w) or grid[nr, nc] == int(CellType.DOOR):
                continue  # forced halt
            p_split = config.p_split0 * config.split_decay ** splits
            p_halt = min(config.halt_cap, config.halt_slope * road.length)
            u = rng.random()
            if u < p_split:
                splits += 1
                next_active.append(ActiveRoad(road.head, LEFT_OF[road.direction]))
                next_active.append(ActiveRoad(road.head, RIGHT_OF[road.direction]))
            elif u < p_split + p_halt:
                continue
            else:
                if grid[nr, nc] == int(CellType.ROAD):
                    continue  # merged into an existing road; halt
                grid[nr, nc] = int(CellType.ROAD)
                road.head = (nr, nc)
                road.length += 1
                next_active.append(road)
        active = next_active

    free_rows, free_cols = np.nonzero(grid == UNASSIGNED)
    n_free = len(free_rows)
    if n_free < config.n_evses:
        return None
    picks = rng.choice(n_free, size=config.n_evses, replace=False)
    for i in picks:
        grid[free_rows[i], free_cols[i]] = int(CellType.EVSE)
    grid[grid == UNASSIGNED] = int(CellType.PARKING)
    return Layout(grid)


def generate_layout(config: LotGenConfig) -> Layout:
    """Generate one layout, deterministic in the config seed.

    Retries internally (same RNG stream) when road growth leaves fewer
    unassigned cells than EVSEs requested.
    """
    rng = np.random.default_rng(config.seed)
    for _ in range(100):
        layout = _grow(config, rng)
        if layout is not None:
            return layout
    raise RuntimeError("could not place requested EVSEs after 100 attempts")


def generate_layout_with_reachability(config: LotGenConfig) -> Layout:
    """Regenerate (derived seeds) until at least one EVSE is reachable."""
    seed_seq = np.random.SeedSequence(config.seed)
    for child in seed_seq.spawn(1000):
        attempt = LotGenConfig(
            height=config.height, width=config.width, n_evses=config.n_evses,
            p_door=config.p_door, p_split0=config.p_split0,
            split_decay=config.split_decay, halt_slope=config.halt_slope,
            halt_cap=config.halt_cap, seed=child.generate_state(1)[0],
        )
        layout = generate_layout(attempt)
        if reachable_evses(layout):
            return layout
    raise RuntimeError("1000 layouts in a row had no reachable EVSE; check config")
