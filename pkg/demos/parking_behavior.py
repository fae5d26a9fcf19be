"""
Where do drivers end up? Parking-choice statistics
==================================================

Runs the stochastic parking process many times on one fixed lot and
shows how EVSE choice frequencies respond to crowding.
"""

import numpy as np

from evlot import (ParkingRules, Schedule, VehicleEvent, parse_layout,
                   reachable_evses, simulate_parking)

# one door at the top, a road spine with a branch, EVSEs at varying
# distances; the bottom-left EVSE has no road access at all
layout = parse_layout(
    "PEDPP\n"
    "PPRPP\n"
    "PERRE\n"
    "PPRPP\n"
    "EPREP\n"
)
reachable = reachable_evses(layout)

ev = VehicleEvent(0, "EV", 0.0, 700.0, energy_kwh=5.0, peak_rate_kw=6.6)
schedule = Schedule((ev,))

n = 50_000
counts = {}
skipped = 0
for seed in range(n):
    placement = simulate_parking(layout, schedule, ParkingRules(), seed=seed)
    if placement.assignments:
        _, r, c = placement.assignments[0]
        counts[(r, c)] = counts.get((r, c), 0) + 1
    else:
        skipped += 1

print(f"single EV, {n} independent days:")
for cell in sorted(layout.evse_cells()):
    freq = counts.get(cell, 0) / n
    mark = "" if cell in reachable else "  <- unreachable, never chosen"
    print(f"  EVSE {cell}: {freq:.4f}{mark}")
print(f"  gave up: {skipped / n:.4f}")

# crowding: more EVs per day shifts mass toward farther EVSEs because
# near spots fill up and occupied neighbors deter parking
print("\nfirst-choice EVSE frequency vs number of earlier arrivals:")
near, far = (2, 1), (2, 4)
for n_early in (0, 2, 4):
    events = [VehicleEvent(i, "EV", float(i), 700.0, energy_kwh=5.0,
                           peak_rate_kw=6.6) for i in range(n_early)]
    events.append(VehicleEvent(n_early, "EV", 10.0 + n_early, 700.0,
                               energy_kwh=5.0, peak_rate_kw=6.6))
    sched = Schedule(tuple(events))
    hits = {near: 0, far: 0}
    for seed in range(10_000):
        placement = simulate_parking(layout, sched, ParkingRules(), seed=seed)
        for vid, r, c in placement.assignments:
            if vid == n_early and (r, c) in hits:
                hits[(r, c)] += 1
    print(f"  {n_early} earlier EVs: center {hits[near] / 10_000:.4f}, "
          f"right edge {hits[far] / 10_000:.4f}")
