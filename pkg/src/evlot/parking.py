"""Behavioral parking simulator.

Each arriving vehicle enters at a random door, walks the road network as
a randomized depth-first search, and at every road/door cell tries the
adjacent free spots of its type independently. The per-spot probability
drops with occupied neighbors and rises on boundary spots.
"""

import heapq
from dataclasses import dataclass

import numpy as np

from .grid import CellType, Layout, NEIGHBOR_OFFSETS, Placement, Schedule

SPOT_TYPES = (CellType.PARKING, CellType.EVSE)


@dataclass(frozen=True)
class ParkingRules:
    p_base: float = 0.5
    occupied_neighbor_factor: float = 0.5
    edge_bonus: float = 1.5
    p_max: float = 0.95

    def __post_init__(self):
        if not 0 < self.p_base <= 1 or not 0 < self.p_max <= 1:
            raise ValueError("p_base and p_max must be in (0, 1]")
        if self.occupied_neighbor_factor <= 0 or self.edge_bonus <= 0:
            raise ValueError("rule factors must be positive")


class OccupancyState:
    """Which spot cells are taken, and until when."""

    def __init__(self):
        self._occupants = {}  # (row, col) -> (vehicle_id, departure)
        self._departures = []  # heap of (departure, row, col)

    def occupy(self, cell, vehicle_id, departure, now):
        if cell in self._occupants:
            raise RuntimeError(f"cell {cell} double-booked")
        if departure <= now:
            raise ValueError("occupant departure must exceed current time")
        self._occupants[cell] = (vehicle_id, departure)
        heapq.heappush(self._departures, (departure, cell))

    def release_until(self, now):
        """Free every cell whose occupant departs at or before `now`."""
        while self._departures and self._departures[0][0] <= now:
            _, cell = heapq.heappop(self._departures)
            self._occupants.pop(cell, None)

    def is_occupied(self, cell) -> bool:
        return cell in self._occupants

    def occupied_cells(self) -> set:
        return set(self._occupants)


def park_probability(layout: Layout, occupancy: OccupancyState, spot, rules: ParkingRules) -> float:
    """Probability a vehicle takes a free spot it is standing next to."""
    r, c = spot
    if layout.cell(r, c) not in SPOT_TYPES:
        raise ValueError(f"cell {spot} is not a parking/EVSE spot")
    if occupancy.is_occupied(spot):
        raise ValueError(f"cell {spot} is not free")
    n_occupied = sum(
        1
        for nr, nc in layout.neighbors(r, c)
        if layout.cell(nr, nc) in SPOT_TYPES and occupancy.is_occupied((nr, nc))
    )
    p = rules.p_base * rules.occupied_neighbor_factor ** n_occupied
    if layout.is_boundary(r, c):
        p *= rules.edge_bonus
    return min(max(p, 0.0), rules.p_max)


def build_road_tree(layout: Layout, door) -> dict:
    """Road network as a tree rooted at `door`: node -> ordered child list.

    Cycles from merged roads are broken by first-visit (BFS) parenting.
    Nodes are road and door cells.
    """
    children = {door: []}
    queue = [door]
    while queue:
        next_queue = []
        for cell in queue:
            for nr, nc in layout.neighbors(*cell):
                if (nr, nc) in children:
                    continue
                if layout.cell(nr, nc) in (CellType.ROAD, CellType.DOOR):
                    children[(nr, nc)] = []
                    children[cell].append((nr, nc))
                    next_queue.append((nr, nc))
        queue = next_queue
    return children


def _try_park_here(layout, occupancy, cell, spot_type, rules, rng):
    """Scan N,E,S,W for free spots of the wanted type; independent trials."""
    r, c = cell
    for dr, dc in NEIGHBOR_OFFSETS:
        spot = (r + dr, c + dc)
        if not layout.in_grid(*spot):
            continue
        if layout.cell(*spot) != spot_type or occupancy.is_occupied(spot):
            continue
        if rng.random() < park_probability(layout, occupancy, spot, rules):
            return spot
    return None


def _dfs_park(layout, occupancy, tree, root, spot_type, rules, rng):
    stack = [root]
    while stack:
        node = stack.pop()
        spot = _try_park_here(layout, occupancy, node, spot_type, rules, rng)
        if spot is not None:
            return spot
        kids = tree[node]
        order = rng.permutation(len(kids)) if len(kids) > 1 else range(len(kids))
        for i in reversed(list(order)):
            stack.append(kids[i])
    return None


def simulate_parking(layout: Layout, schedule: Schedule, rules: ParkingRules, seed: int = 0) -> Placement:
    """Park every scheduled vehicle (or skip it); deterministic in seed."""
    doors = layout.door_cells()
    if not doors:
        raise ValueError("layout has no doors")
    rng = np.random.default_rng(seed)
    occupancy = OccupancyState()
    trees = {}  # door -> road tree, occupancy-independent
    assignments = []
    skipped = []
    for event in schedule.events:
        occupancy.release_until(event.arrival)
        door = doors[rng.integers(len(doors))]
        if door not in trees:
            trees[door] = build_road_tree(layout, door)
        spot_type = CellType.EVSE if event.kind == "EV" else CellType.PARKING
        spot = _dfs_park(layout, occupancy, trees[door], door, spot_type, rules, rng)
        if spot is None:
            skipped.append(event.id)
            continue
        occupancy.occupy(spot, event.id, event.departure, event.arrival)
        if event.kind == "EV":
            assignments.append((event.id, spot[0], spot[1]))
    return Placement(assignments=tuple(assignments), skipped=tuple(skipped))
