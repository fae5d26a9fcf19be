"""Charging-rate scheduling over the placement produced by the parking sim.

An online LP is re-solved at every EV arrival over the remaining slots of
all EVs currently present, maximizing early energy delivery (weights decay
linearly with slot index). A greedy path covers the unbounded-capacity
case exactly and much faster.
"""

import math
from dataclasses import dataclass

import numpy as np

from .grid import EvseStats, Layout, Placement, Schedule
from .simplex import LpProblem, solve_lp


@dataclass(frozen=True)
class ChargeConfig:
    slot_minutes: float = 5.0
    network_capacity: float = math.inf  # kW; inf = unconstrained
    horizon: float = 720.0

    def __post_init__(self):
        if self.slot_minutes <= 0 or self.horizon % self.slot_minutes != 0:
            raise ValueError("slot_minutes must be positive and divide the horizon")
        if self.network_capacity <= 0:
            raise ValueError("network capacity must be positive")

    @property
    def n_slots(self) -> int:
        return int(round(self.horizon / self.slot_minutes))

    @property
    def slot_hours(self) -> float:
        return self.slot_minutes / 60.0


@dataclass
class RateProfile:
    """Per-EVSE charging rates (kW) for each timeslot of the horizon."""

    evses: tuple  # (row, col) per profile row, all EVSE cells of the layout
    rates: np.ndarray  # shape (n_evses, n_slots)
    occupied: np.ndarray  # bool, same shape: slot has an EV present

    def row_index(self) -> dict:
        return {cell: i for i, cell in enumerate(self.evses)}


@dataclass
class _Session:
    ev_id: int
    evse_index: int
    arrival: float
    start_slot: int
    end_slot: int  # exclusive, clipped to horizon
    peak_kw: float
    demand_kwh: float


def _sessions(layout, schedule, placement, config):
    """Placement rows joined with schedule events, discretized to slots."""
    events = {e.id: e for e in schedule.events}
    evse_index = {cell: i for i, cell in enumerate(layout.evse_cells())}
    out = []
    for ev_id, r, c in placement.assignments:
        if ev_id not in events:
            raise ValueError(f"placement references unknown EV id {ev_id}")
        if (r, c) not in evse_index:
            raise ValueError(f"placement cell ({r}, {c}) is not an EVSE")
        e = events[ev_id]
        start = int(e.arrival // config.slot_minutes)
        end = min(int(e.departure // config.slot_minutes), config.n_slots)
        out.append(_Session(ev_id, evse_index[(r, c)], e.arrival, start, end,
                            e.peak_rate_kw, e.energy_kwh))
    out.sort(key=lambda s: (s.arrival, s.ev_id))
    return out


def _empty_profile(layout, config, sessions):
    evses = tuple(layout.evse_cells())
    rates = np.zeros((len(evses), config.n_slots))
    occupied = np.zeros_like(rates, dtype=bool)
    for s in sessions:
        occupied[s.evse_index, s.start_slot : s.end_slot] = True
    return RateProfile(evses=evses, rates=rates, occupied=occupied)


def schedule_charging(layout: Layout, schedule: Schedule, placement: Placement,
                      config: ChargeConfig) -> RateProfile:
    """Event-driven online LP: re-plan all present EVs at every arrival."""
    sessions = _sessions(layout, schedule, placement, config)
    profile = _empty_profile(layout, config, sessions)
    dh = config.slot_hours
    n_slots = config.n_slots

    for k, arriving in enumerate(sessions):
        now = arriving.start_slot
        if now >= n_slots:
            continue
        present = [s for s in sessions[: k + 1] if s.end_slot > now and s.start_slot <= now]
        # energy already delivered under the previous plan stays delivered
        var_slots = []  # (session, slot) per LP variable
        remaining = {}
        for s in present:
            done = profile.rates[s.evse_index, s.start_slot : now].sum() * dh
            remaining[s.ev_id] = max(s.demand_kwh - done, 0.0)
            profile.rates[s.evse_index, now : s.end_slot] = 0.0
            var_slots.extend((s, t) for t in range(now, s.end_slot))
        if not var_slots:
            continue

        n = len(var_slots)
        objective = np.array([n_slots - t for _, t in var_slots], dtype=float)
        upper = np.array([s.peak_kw for s, _ in var_slots])
        rows, rhs = [], []
        for s in present:
            row = np.array([dh if vs is s else 0.0 for vs, _ in var_slots])
            rows.append(row)
            rhs.append(remaining[s.ev_id])
        if math.isfinite(config.network_capacity):
            for t in range(now, max(s.end_slot for s in present)):
                row = np.array([1.0 if vt == t else 0.0 for _, vt in var_slots])
                if row.any():
                    rows.append(row)
                    rhs.append(config.network_capacity)
        problem = LpProblem(objective=objective, a_ub=np.array(rows),
                            b_ub=np.array(rhs), upper_bounds=upper)
        _, x = solve_lp(problem)
        for (s, t), rate in zip(var_slots, x):
            profile.rates[s.evse_index, t] = rate
    np.clip(profile.rates, 0.0, None, out=profile.rates)
    return profile


def greedy_schedule(layout: Layout, schedule: Schedule, placement: Placement,
                    config: ChargeConfig) -> RateProfile:
    """Unbounded-capacity fast path: every EV charges at peak until done.

    Matches the LP path exactly there, since the LP decomposes per EV and
    its decaying slot weights force front-loading.
    """
    if math.isfinite(config.network_capacity):
        raise ValueError("greedy path requires unbounded network capacity")
    sessions = _sessions(layout, schedule, placement, config)
    profile = _empty_profile(layout, config, sessions)
    dh = config.slot_hours
    for s in sessions:
        left = s.demand_kwh
        for t in range(s.start_slot, s.end_slot):
            if left <= 0:
                break
            rate = min(s.peak_kw, left / dh)
            profile.rates[s.evse_index, t] = rate
            left -= rate * dh
    return profile


def best_schedule(layout, schedule, placement, config: ChargeConfig) -> RateProfile:
    """Greedy when capacity is unbounded, LP otherwise."""
    if math.isfinite(config.network_capacity):
        return schedule_charging(layout, schedule, placement, config)
    return greedy_schedule(layout, schedule, placement, config)


def compute_stats(profile: RateProfile, config: ChargeConfig) -> list:
    """Per-EVSE total energy and mean rate over occupied slots."""
    out = []
    for i, (r, c) in enumerate(profile.evses):
        p_tot = float(profile.rates[i].sum() * config.slot_hours)
        n_occ = int(profile.occupied[i].sum())
        tau = float(profile.rates[i][profile.occupied[i]].mean()) if n_occ else 0.0
        if tau == 0.0:
            p_tot = 0.0  # guard against residual float dust
        out.append(EvseStats(row=r, col=c, tau_kw=tau, p_tot_kwh=p_tot))
    return out


PROFILE_HEADER_PREFIX = ["row", "col"]


def serialize_profile(profile: RateProfile, config: ChargeConfig) -> str:
    """Rate matrix as CSV: one row per EVSE, one column per slot."""
    from .grid import fmt

    header = PROFILE_HEADER_PREFIX + [f"t{t}" for t in range(config.n_slots)]
    lines = [",".join(header)]
    for i, (r, c) in enumerate(profile.evses):
        lines.append(",".join([str(r), str(c)] + [fmt(v) for v in profile.rates[i]]))
    return "\n".join(lines) + "\n"
