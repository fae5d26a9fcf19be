"""Synthetic 12-hour arrival schedules for EVs and normal cars.

Arrivals are uniform over the horizon; parked durations and average
charging rates are truncated normals, with each EV's energy demand
recomputed as rate x duration so it is always achievable at peak.
"""

from dataclasses import dataclass, field

import numpy as np

from .grid import Schedule, VehicleEvent

DEFAULT_PEAK_POOL = (3.3, 6.6, 7.2, 10.0, 19.2)


@dataclass(frozen=True)
class ScheduleGenConfig:
    n_evs: int = 50
    n_cars: int = 100
    horizon: float = 720.0
    parked_mean: float = 4.0  # hours
    parked_std: float = 2.0
    rate_mean: float = 10.0  # kW
    rate_std: float = 5.0
    peak_rate_pool: tuple = DEFAULT_PEAK_POOL
    seed: int = 0

    def __post_init__(self):
        if self.n_evs < 0 or self.n_cars < 0:
            raise ValueError("vehicle counts must be >= 0")
        if self.parked_std < 0 or self.rate_std < 0:
            raise ValueError("standard deviations must be >= 0")
        if not self.peak_rate_pool or min(self.peak_rate_pool) <= 0:
            raise ValueError("peak rate pool must be non-empty and positive")
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")


def _truncated_normal(rng, mean, std, low, high=np.inf, low_open=True):
    """Rejection-sample Normal(mean, std) into (low, high] (or [low, high])."""
    if std == 0:
        if (low < mean if low_open else low <= mean) and mean <= high:
            return mean
        raise ValueError("degenerate distribution outside truncation range")
    while True:
        x = rng.normal(mean, std)
        if (low < x if low_open else low <= x) and x <= high:
            return x


def generate_schedule(config: ScheduleGenConfig) -> Schedule:
    """Sample one schedule; deterministic in the config seed."""
    rng = np.random.default_rng(config.seed)
    events = []
    for _ in range(config.n_evs):
        arrival = rng.uniform(0.0, config.horizon)
        peak = config.peak_rate_pool[rng.integers(len(config.peak_rate_pool))]
        parked_h = _truncated_normal(rng, config.parked_mean, config.parked_std, 0.0)
        rate = _truncated_normal(rng, config.rate_mean, config.rate_std, 0.0, high=peak)
        events.append(("EV", arrival, arrival + parked_h * 60.0, rate * parked_h, peak))
    for _ in range(config.n_cars):
        arrival = rng.uniform(0.0, config.horizon)
        parked_h = _truncated_normal(rng, config.parked_mean, config.parked_std, 0.0)
        events.append(("CAR", arrival, arrival + parked_h * 60.0, None, None))
    events.sort(key=lambda e: e[1])
    out = tuple(
        VehicleEvent(i, kind, arr, dep, energy, peak)
        for i, (kind, arr, dep, energy, peak) in enumerate(events)
    )
    return Schedule(out, horizon=config.horizon)
