"""Core grid model: cell types, layouts, schedules, placements and their file formats.

The layout file format is one character per cell ('D' door, 'R' road,
'E' EVSE, 'P' parking), newline-terminated rows, dimensions inferred.
Schedules, placements and per-EVSE statistics travel as CSV.
"""

import csv
import io
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional

import numpy as np


class CellType(IntEnum):
    DOOR = 0
    ROAD = 1
    EVSE = 2
    PARKING = 3


CELL_CHARS = {
    CellType.DOOR: "D",
    CellType.ROAD: "R",
    CellType.EVSE: "E",
    CellType.PARKING: "P",
}
CHAR_CELLS = {c: t for t, c in CELL_CHARS.items()}

NEIGHBOR_OFFSETS = ((-1, 0), (0, 1), (1, 0), (0, -1))  # N, E, S, W scan order


class LayoutError(ValueError):
    """Raised for malformed or invariant-violating layout data."""


class Layout:
    """Rectangular grid of typed cells. Immutable after construction."""

    def __init__(self, cells: np.ndarray):
        cells = np.asarray(cells, dtype=np.uint8)
        if cells.ndim != 2 or cells.size == 0:
            raise LayoutError("layout grid must be a non-empty 2D array")
        if cells.max(initial=0) > max(CellType):
            raise LayoutError("unknown cell code in grid")
        self._cells = cells.copy()
        self._cells.setflags(write=False)
        self._validate()

    def _validate(self):
        for r, c in self.cells_of_type(CellType.DOOR):
            if not self.is_boundary(r, c):
                raise LayoutError(f"door not on boundary at ({r}, {c})")

    @property
    def height(self) -> int:
        return self._cells.shape[0]

    @property
    def width(self) -> int:
        return self._cells.shape[1]

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    def cell(self, row: int, col: int) -> CellType:
        return CellType(self._cells[row, col])

    def in_grid(self, row: int, col: int) -> bool:
        return 0 <= row < self.height and 0 <= col < self.width

    def is_boundary(self, row: int, col: int) -> bool:
        return row in (0, self.height - 1) or col in (0, self.width - 1)

    def neighbors(self, row: int, col: int):
        for dr, dc in NEIGHBOR_OFFSETS:
            r, c = row + dr, col + dc
            if self.in_grid(r, c):
                yield r, c

    def cells_of_type(self, cell_type: CellType) -> list:
        rows, cols = np.nonzero(self._cells == int(cell_type))
        return list(zip(rows.tolist(), cols.tolist()))

    def evse_cells(self) -> list:
        return self.cells_of_type(CellType.EVSE)

    def door_cells(self) -> list:
        return self.cells_of_type(CellType.DOOR)

    def __eq__(self, other):
        return isinstance(other, Layout) and np.array_equal(self._cells, other._cells)

    def __hash__(self):
        return hash(self._cells.tobytes())

    def __repr__(self):
        return f"Layout({self.height}x{self.width}, {len(self.evse_cells())} EVSEs)"


def parse_layout(text: str) -> Layout:
    """Parse a character-grid layout file into a validated Layout."""
    lines = text.splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise LayoutError("empty layout file")
    width = len(lines[0])
    rows = []
    for i, line in enumerate(lines):
        if len(line) != width:
            raise LayoutError(f"ragged row {i}: expected {width} cells, got {len(line)}")
        row = []
        for ch in line:
            if ch not in CHAR_CELLS:
                raise LayoutError(f"unknown cell character {ch!r} in row {i}")
            row.append(int(CHAR_CELLS[ch]))
        rows.append(row)
    return Layout(np.array(rows, dtype=np.uint8))


def serialize_layout(layout: Layout) -> str:
    """Canonical text form; parse(serialize(L)) == L."""
    lines = []
    for r in range(layout.height):
        lines.append("".join(CELL_CHARS[layout.cell(r, c)] for c in range(layout.width)))
    return "\n".join(lines) + "\n"


def road_connected_cells(layout: Layout) -> set:
    """All Road/Door cells reachable from some door via 4-adjacency."""
    frontier = list(layout.door_cells())
    seen = set(frontier)
    while frontier:
        r, c = frontier.pop()
        for nr, nc in layout.neighbors(r, c):
            if (nr, nc) in seen:
                continue
            if layout.cell(nr, nc) in (CellType.ROAD, CellType.DOOR):
                seen.add((nr, nc))
                frontier.append((nr, nc))
    return seen


def reachable_evses(layout: Layout) -> set:
    """EVSE cells adjacent to a road/door cell that is itself connected to a door."""
    connected = road_connected_cells(layout)
    out = set()
    for r, c in layout.evse_cells():
        if any((nr, nc) in connected for nr, nc in layout.neighbors(r, c)):
            out.add((r, c))
    return out


@dataclass(frozen=True)
class VehicleEvent:
    """One arrival in a schedule. Cars carry no energy fields."""

    id: int
    kind: str  # "EV" or "CAR"
    arrival: float  # minutes
    departure: float  # minutes
    energy_kwh: Optional[float] = None
    peak_rate_kw: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("EV", "CAR"):
            raise ValueError(f"unknown vehicle kind {self.kind!r}")
        if not self.departure > self.arrival:
            raise ValueError(f"event {self.id}: departure must exceed arrival")
        if self.kind == "EV":
            if self.energy_kwh is None or self.peak_rate_kw is None:
                raise ValueError(f"EV event {self.id} missing energy or peak rate")
            if self.energy_kwh < 0 or self.peak_rate_kw <= 0:
                raise ValueError(f"EV event {self.id}: bad energy/peak values")
            hours = (self.departure - self.arrival) / 60.0
            if self.energy_kwh > self.peak_rate_kw * hours * (1 + 1e-9):
                raise ValueError(f"EV event {self.id}: demand not achievable at peak rate")


@dataclass(frozen=True)
class Schedule:
    events: tuple
    horizon: float = 720.0

    def __post_init__(self):
        arrivals = [e.arrival for e in self.events]
        if arrivals != sorted(arrivals):
            raise ValueError("schedule events must be sorted by arrival")
        ids = [e.id for e in self.events]
        if len(set(ids)) != len(ids):
            raise ValueError("schedule event ids must be unique")

    def evs(self):
        return [e for e in self.events if e.kind == "EV"]

    def cars(self):
        return [e for e in self.events if e.kind == "CAR"]


SCHEDULE_HEADER = ["id", "kind", "arrival_min", "departure_min", "energy_kwh", "peak_rate_kw"]


def serialize_schedule(schedule: Schedule) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCHEDULE_HEADER)
    for e in schedule.events:
        if e.kind == "EV":
            w.writerow([e.id, e.kind, fmt(e.arrival), fmt(e.departure),
                        fmt(e.energy_kwh), fmt(e.peak_rate_kw)])
        else:
            w.writerow([e.id, e.kind, fmt(e.arrival), fmt(e.departure), "", ""])
    return buf.getvalue()


def parse_schedule(text: str, horizon: float = 720.0) -> Schedule:
    rdr = csv.reader(io.StringIO(text))
    header = next(rdr)
    if header != SCHEDULE_HEADER:
        raise ValueError(f"bad schedule header: {header}")
    events = []
    for row in rdr:
        if not row:
            continue
        eid, kind, arr, dep, energy, peak = row
        if kind == "EV":
            events.append(VehicleEvent(int(eid), kind, float(arr), float(dep),
                                       float(energy), float(peak)))
        else:
            events.append(VehicleEvent(int(eid), kind, float(arr), float(dep)))
    return Schedule(tuple(events), horizon=horizon)


@dataclass(frozen=True)
class Placement:
    """Simulated assignment of EVs to EVSE cells, plus vehicles that left unparked."""

    assignments: tuple = ()  # (ev_id, row, col)
    skipped: tuple = ()  # vehicle ids (EVs and cars)

    def evse_of(self) -> dict:
        return {ev_id: (r, c) for ev_id, r, c in self.assignments}


PLACEMENT_HEADER = ["ev_id", "row", "col"]


def serialize_placement(placement: Placement) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PLACEMENT_HEADER)
    for ev_id, r, c in placement.assignments:
        w.writerow([ev_id, r, c])
    return buf.getvalue()


def parse_placement(text: str) -> Placement:
    rdr = csv.reader(io.StringIO(text))
    header = next(rdr)
    if header != PLACEMENT_HEADER:
        raise ValueError(f"bad placement header: {header}")
    assignments = tuple((int(a), int(b), int(c)) for a, b, c in rdr)
    return Placement(assignments=assignments)


@dataclass(frozen=True)
class EvseStats:
    """Per-EVSE usage targets: average rate over occupied slots and total energy."""

    row: int
    col: int
    tau_kw: float
    p_tot_kwh: float

    def __post_init__(self):
        if self.tau_kw < 0 or self.p_tot_kwh < 0:
            raise ValueError("negative usage statistic")
        if (self.tau_kw == 0) != (self.p_tot_kwh == 0):
            raise ValueError("tau and p_tot must vanish together")


STATS_HEADER = ["row", "col", "tau_kw", "p_tot_kwh"]


def serialize_stats(stats: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_HEADER)
    for s in stats:
        w.writerow([s.row, s.col, fmt(s.tau_kw), fmt(s.p_tot_kwh)])
    return buf.getvalue()


def parse_stats(text: str) -> list:
    rdr = csv.reader(io.StringIO(text))
    header = next(rdr)
    if header != STATS_HEADER:
        raise ValueError(f"bad stats header: {header}")
    return [EvseStats(int(r), int(c), float(t), float(p)) for r, c, t, p in rdr]


def fmt(x: float) -> str:
    """Stable float formatting so identical runs produce identical bytes."""
    return format(float(x), ".10g")
