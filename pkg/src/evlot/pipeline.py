"""End-to-end dataset generation and training experiments.

One master seed fans out to every stage through a hash-based splitting
rule (recorded in the manifest), so any layout, schedule or simulation
can be regenerated in isolation and reruns are byte-identical.
"""

import csv
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from .charging import ChargeConfig, best_schedule, compute_stats
from .features import FeatureConfig, door_distance_map, extract_features
from .grid import Layout, fmt, serialize_layout
from .lotgen import LotGenConfig, generate_layout_with_reachability
from .mlp import ModelConfig, config_for_model, feature_config_for_model, save_model, train
from .parking import ParkingRules, simulate_parking
from .schedules import ScheduleGenConfig, generate_schedule


def subseed(master: int, stage: str, index: int) -> int:
    """Stable 64-bit sub-seed for (master seed, stage name, index)."""
    digest = hashlib.sha256(f"{master}/{stage}/{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class PipelineConfig:
    n_train_layouts: int = 1215
    n_val_layouts: int = 141
    schedules_per_layout: int = 20
    lot: LotGenConfig = field(default_factory=lambda: LotGenConfig(30, 30, 15))
    schedule: ScheduleGenConfig = field(default_factory=ScheduleGenConfig)
    rules: ParkingRules = field(default_factory=ParkingRules)
    charge: ChargeConfig = field(default_factory=ChargeConfig)
    features: FeatureConfig = field(default_factory=lambda: FeatureConfig(m=9, include_door_distance=True))
    master_seed: int = 0

    def __post_init__(self):
        if self.n_train_layouts <= 0 or self.n_val_layouts <= 0:
            raise ValueError("layout counts must be positive")
        if self.schedules_per_layout <= 0:
            raise ValueError("schedules_per_layout must be positive")

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        kwargs = dict(raw)
        for key, sub in (("lot", LotGenConfig), ("schedule", ScheduleGenConfig),
                         ("rules", ParkingRules), ("charge", ChargeConfig),
                         ("features", FeatureConfig)):
            if key in kwargs and isinstance(kwargs[key], dict):
                params = dict(kwargs[key])
                if key == "schedule" and "peak_rate_pool" in params:
                    params["peak_rate_pool"] = tuple(params["peak_rate_pool"])
                if key == "charge" and params.get("network_capacity") in (None, "inf"):
                    params["network_capacity"] = math.inf
                kwargs[key] = sub(**params)
        return cls(**kwargs)


def layout_targets(layout: Layout, config: PipelineConfig, lot_index: int, split: str):
    """Average per-EVSE (tau, P_tot) over the configured number of schedules."""
    evses = layout.evse_cells()
    taus = np.zeros((config.schedules_per_layout, len(evses)))
    ptots = np.zeros_like(taus)
    for j in range(config.schedules_per_layout):
        sched_cfg = ScheduleGenConfig(**{
            **asdict(config.schedule),
            "peak_rate_pool": config.schedule.peak_rate_pool,
            "seed": subseed(config.master_seed, f"{split}-schedule-{lot_index}", j),
        })
        schedule = generate_schedule(sched_cfg)
        placement = simulate_parking(
            layout, schedule, config.rules,
            seed=subseed(config.master_seed, f"{split}-sim-{lot_index}", j))
        profile = best_schedule(layout, schedule, placement, config.charge)
        stats = compute_stats(profile, config.charge)
        for k, s in enumerate(stats):
            taus[j, k] = s.tau_kw
            ptots[j, k] = s.p_tot_kwh
    return evses, taus.mean(axis=0), ptots.mean(axis=0)


def build_layout_rows(config: PipelineConfig, lot_index: int, split: str):
    """One dataset row per EVSE of one generated layout."""
    lot_cfg = LotGenConfig(**{
        **asdict(config.lot),
        "seed": subseed(config.master_seed, f"{split}-lot", lot_index),
    })
    layout = generate_layout_with_reachability(lot_cfg)
    evses, taus, ptots = layout_targets(layout, config, lot_index, split)
    dmap = door_distance_map(layout) if config.features.include_door_distance else None
    rows = []
    for k, (r, c) in enumerate(evses):
        vec = extract_features(layout, (r, c), config.features, distance_map=dmap)
        rows.append([lot_index, r, c, *[fmt(v) for v in vec], fmt(taus[k]), fmt(ptots[k])])
    return rows, serialize_layout(layout)


def _worker(args):
    config, lot_index, split = args
    return build_layout_rows(config, lot_index, split)


def run_dataset(config: PipelineConfig, out_dir, jobs: int = 1):
    """Write train.csv / val.csv (+ layouts and a seed manifest) under out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    lot_dir = os.path.join(out_dir, "layouts")
    os.makedirs(lot_dir, exist_ok=True)
    n_features = config.features.vector_length
    header = ["lot_id", "row", "col", *[f"f_{i}" for i in range(n_features)],
              "tau_kw", "p_tot_kwh"]

    for split, count in (("train", config.n_train_layouts), ("val", config.n_val_layouts)):
        tasks = [(config, i, split) for i in range(count)]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_worker, tasks, chunksize=1))
        else:
            results = [_worker(t) for t in tasks]
        path = os.path.join(out_dir, f"{split}.csv")
        with open(path, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(header)
            for i, (rows, layout_text) in enumerate(results):
                for row in rows:
                    w.writerow(row)
                with open(os.path.join(lot_dir, f"{split}_lot_{i}.txt"), "w") as lf:
                    lf.write(layout_text)

    manifest = {
        "master_seed": config.master_seed,
        "seed_rule": "subseed = first 8 bytes of sha256('{master}/{stage}/{index}'), big-endian",
        "stages": ["{split}-lot", "{split}-schedule-{lot}", "{split}-sim-{lot}"],
        "config": _config_dict(config),
        "feature_columns": n_features,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)


def _config_dict(config: PipelineConfig) -> dict:
    d = asdict(config)
    cap = d["charge"]["network_capacity"]
    if math.isinf(cap):
        d["charge"]["network_capacity"] = "inf"
    d["schedule"]["peak_rate_pool"] = list(config.schedule.peak_rate_pool)
    return d


def load_dataset(path, input_size: int):
    """Read a dataset CSV, slicing features to the first `input_size` columns
    (models without the door-distance term drop the trailing column)."""
    with open(path, newline="") as f:
        rdr = csv.reader(f)
        header = next(rdr)
        n_features = sum(1 for h in header if h.startswith("f_"))
        if input_size > n_features:
            raise ValueError(f"dataset has {n_features} features, model wants {input_size}")
        feats, targets, coords = [], [], []
        for row in rdr:
            feats.append([float(v) for v in row[3 : 3 + input_size]])
            targets.append([float(row[-2]), float(row[-1])])
            coords.append((int(row[0]), int(row[1]), int(row[2])))
    return np.array(feats), np.array(targets), coords


def run_experiment(dataset_dir, model_ids, out_dir, m: int = None,
                   epochs: int = None, seed: int = 0):
    """Train each requested model id on the dataset; write models + histories."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(dataset_dir, "manifest.json")) as f:
        manifest = json.load(f)
    if m is None:
        m = manifest["config"]["features"]["m"]
    results = {}
    for model_id in model_ids:
        overrides = {"seed": seed}
        if epochs is not None:
            overrides["epochs"] = epochs
        config = config_for_model(model_id, m=m, **overrides)
        feat_cfg = feature_config_for_model(model_id, m=m)
        x, y, _ = load_dataset(os.path.join(dataset_dir, "train.csv"), config.input_size)
        xv, yv, _ = load_dataset(os.path.join(dataset_dir, "val.csv"), config.input_size)
        model, history = train(x, y, config, features=feat_cfg, x_val=xv, y_val_raw=yv)
        model_path = os.path.join(out_dir, f"model_{model_id}.json")
        save_model(model, model_path)
        hist_path = os.path.join(out_dir, f"history_{model_id}.csv")
        with open(hist_path, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["epoch", "train_mse", "val_mse"])
            for epoch, tr, va in history:
                w.writerow([epoch, fmt(tr), fmt(va)])
        results[model_id] = (model_path, hist_path, history)
    return results
