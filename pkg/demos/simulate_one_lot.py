"""
Simulate a single parking lot end to end
========================================

Generates a random lot, a day's worth of arrivals, parks everyone,
schedules charging, and prints the per-EVSE usage statistics.
"""

import numpy as np

from evlot import (ChargeConfig, LotGenConfig, ParkingRules, ScheduleGenConfig,
                   best_schedule, compute_stats, generate_layout_with_reachability,
                   generate_schedule, reachable_evses, serialize_layout,
                   simulate_parking)

# a 12x12 lot with 6 charging stations, regenerated until at least one
# EVSE touches the road network
layout = generate_layout_with_reachability(LotGenConfig(12, 12, 6, seed=7))
print(serialize_layout(layout))

reachable = reachable_evses(layout)
print(f"{len(layout.evse_cells())} EVSEs, {len(reachable)} reachable\n")

# 20 EVs and 30 ordinary cars arriving over 12 hours
schedule = generate_schedule(ScheduleGenConfig(n_evs=20, n_cars=30, seed=8))
placement = simulate_parking(layout, schedule, ParkingRules(), seed=9)
print(f"parked {len(placement.assignments)} EVs at EVSEs, "
      f"{len(placement.skipped)} vehicles left without a spot\n")

# charge scheduling: unbounded network capacity, 5-minute slots
config = ChargeConfig()
profile = best_schedule(layout, schedule, placement, config)
stats = compute_stats(profile, config)

print("row col   tau_kw  p_tot_kwh")
for s in stats:
    mark = "" if (s.row, s.col) in reachable else "  (unreachable)"
    print(f"{s.row:3d} {s.col:3d}  {s.tau_kw:7.2f}  {s.p_tot_kwh:9.2f}{mark}")

# peak simultaneous draw across the whole lot
peak = profile.rates.sum(axis=0).max()
print(f"\npeak network draw: {peak:.1f} kW")
print(f"energy delivered:  {profile.rates.sum() * config.slot_hours:.1f} kWh")
