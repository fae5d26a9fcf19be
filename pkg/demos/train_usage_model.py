"""
Train a usage-prediction model on a small simulated dataset
============================================================

Builds a miniature dataset (40 lots), trains the log-target model, and
prints the learning curve plus a few sample predictions.
"""

import tempfile
from pathlib import Path

import numpy as np

from evlot import (FeatureConfig, LotGenConfig, PipelineConfig, ScheduleGenConfig,
                   config_for_model, forward, inverse_transform, load_dataset,
                   run_dataset, run_experiment)

workdir = Path(tempfile.mkdtemp(prefix="evlot_demo_"))

# 40 training lots and 8 validation lots, 12x12 with 5 EVSEs each,
# 3 schedules per lot; small enough to run in about a minute
config = PipelineConfig(
    n_train_layouts=40, n_val_layouts=8, schedules_per_layout=3,
    lot=LotGenConfig(12, 12, 5),
    schedule=ScheduleGenConfig(n_evs=15, n_cars=20),
    features=FeatureConfig(m=9, include_door_distance=True),
    master_seed=1,
)
run_dataset(config, workdir)
print(f"dataset written to {workdir}")

# model 2: one 128-unit hidden layer, log-transformed targets
results = run_experiment(workdir, [2], workdir / "models", epochs=60)
_, _, history = results[2]

print("\nepoch  train_mse  val_mse")
for epoch, train_mse, val_mse in history[::10] + [history[-1]]:
    print(f"{epoch:5d}  {train_mse:9.4f}  {val_mse:7.4f}")

# compare predictions against simulated ground truth on the val set
model_cfg = config_for_model(2, m=9)
from evlot import load_model

model = load_model(workdir / "models" / "model_2.json")
x, y, coords = load_dataset(workdir / "val.csv", model_cfg.input_size)
pred = inverse_transform(forward(model, x), model_cfg)

print("\nlot row col   predicted tau  simulated tau")
for i in np.random.default_rng(0).choice(len(y), size=6, replace=False):
    lot, r, c = coords[i]
    print(f"{lot:3d} {r:3d} {c:3d}   {pred[i, 0]:13.2f}  {y[i, 0]:13.2f}")
