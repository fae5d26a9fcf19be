"""EV charging-lot simulation and per-EVSE usage prediction toolkit."""

from .charging import ChargeConfig, RateProfile, best_schedule, compute_stats, greedy_schedule, schedule_charging
from .features import FeatureConfig, door_distance, door_distance_map, extract_features
from .grid import (CellType, EvseStats, Layout, LayoutError, Placement, Schedule,
                   VehicleEvent, parse_layout, parse_placement, parse_schedule, parse_stats,
                   reachable_evses, serialize_layout, serialize_placement,
                   serialize_schedule, serialize_stats)
from .lotgen import LotGenConfig, generate_layout, generate_layout_with_reachability
from .mlp import (MlpModel, ModelConfig, config_for_model, feature_config_for_model,
                  forward, gradients, inverse_transform, load_model, predict_stats,
                  save_model, train, transform_targets)
from .parking import OccupancyState, ParkingRules, park_probability, simulate_parking
from .pipeline import PipelineConfig, load_dataset, run_dataset, run_experiment, subseed
from .schedules import ScheduleGenConfig, generate_schedule
from .simplex import LpError, LpProblem, solve_lp

__version__ = "0.1.0"
