"""Command-line entry point chaining every pipeline stage.

Subcommands: gen-lots, gen-schedules, simulate, charge, featurize,
dataset, train, eval, predict, serve.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .charging import ChargeConfig, best_schedule, compute_stats, schedule_charging, serialize_profile
from .features import FeatureConfig, door_distance_map, extract_features
from .grid import (fmt, parse_layout, parse_placement, parse_schedule, parse_stats,
                   serialize_layout, serialize_placement, serialize_schedule, serialize_stats)
from .lotgen import LotGenConfig, generate_layout_with_reachability
from .mlp import (config_for_model, feature_config_for_model, forward, inverse_transform,
                  load_model, mse, predict_stats, train, transform_targets)
from .parking import ParkingRules, simulate_parking
from .pipeline import PipelineConfig, load_dataset, run_dataset, run_experiment, subseed
from .schedules import ScheduleGenConfig, generate_schedule


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evlot", description="EV charging-lot simulation and usage prediction")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--config", type=str, default=None, help="JSON pipeline config file")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for dataset generation")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-lots", help="generate random lot layouts")
    g.add_argument("--height", type=int, default=30)
    g.add_argument("--width", type=int, default=30)
    g.add_argument("--evses", type=int, default=15)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out-dir", required=True)

    g = sub.add_parser("gen-schedules", help="generate arrival schedules")
    g.add_argument("--evs", type=int, default=50)
    g.add_argument("--cars", type=int, default=100)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out-dir", required=True)

    g = sub.add_parser("simulate", help="run the parking simulator")
    g.add_argument("--lot", required=True)
    g.add_argument("--schedule", required=True)
    g.add_argument("--out", required=True)

    g = sub.add_parser("charge", help="compute charging profiles and per-EVSE stats")
    g.add_argument("--lot", required=True)
    g.add_argument("--schedule", required=True)
    g.add_argument("--placement", required=True)
    g.add_argument("--capacity", type=float, default=None, help="network capacity in kW (omit for unbounded)")
    g.add_argument("--slot-minutes", type=float, default=5.0)
    g.add_argument("--out", required=True)
    g.add_argument("--profile-out", default=None)

    g = sub.add_parser("featurize", help="emit feature rows for every EVSE of a lot")
    g.add_argument("--lot", required=True)
    g.add_argument("--stats", required=True)
    g.add_argument("--m", type=int, default=9)
    g.add_argument("--door-distance", action="store_true")
    g.add_argument("--out", required=True)

    g = sub.add_parser("dataset", help="generate a full train/val dataset")
    g.add_argument("--out-dir", required=True)

    g = sub.add_parser("train", help="train one model configuration")
    g.add_argument("--data", required=True)
    g.add_argument("--val-data", default=None)
    g.add_argument("--model-id", type=int, required=True, choices=range(1, 6))
    g.add_argument("--m", type=int, default=9)
    g.add_argument("--epochs", type=int, default=None)
    g.add_argument("--out-model", required=True)
    g.add_argument("--history-out", default=None)

    g = sub.add_parser("eval", help="evaluate a trained model on a dataset")
    g.add_argument("--model", required=True)
    g.add_argument("--data", required=True)

    g = sub.add_parser("predict", help="print per-EVSE predictions for a layout")
    g.add_argument("--model", required=True)
    g.add_argument("--lot", required=True)

    g = sub.add_parser("serve", help="run the prediction HTTP service")
    g.add_argument("--model", required=True)
    g.add_argument("--port", type=int, default=8000)
    g.add_argument("--bind", default="127.0.0.1")
    return p


def _read(path):
    with open(path) as f:
        return f.read()


def _write(path, text):
    with open(path, "w") as f:
        f.write(text)


def cmd_gen_lots(args):
    os.makedirs(args.out_dir, exist_ok=True)
    for i in range(args.count):
        cfg = LotGenConfig(height=args.height, width=args.width, n_evses=args.evses,
                           seed=subseed(args.seed, "lot", i))
        layout = generate_layout_with_reachability(cfg)
        _write(os.path.join(args.out_dir, f"lot_{i}.txt"), serialize_layout(layout))
    print(f"wrote {args.count} layouts to {args.out_dir}")


def cmd_gen_schedules(args):
    os.makedirs(args.out_dir, exist_ok=True)
    for i in range(args.count):
        cfg = ScheduleGenConfig(n_evs=args.evs, n_cars=args.cars,
                                seed=subseed(args.seed, "schedule", i))
        _write(os.path.join(args.out_dir, f"schedule_{i}.csv"),
               serialize_schedule(generate_schedule(cfg)))
    print(f"wrote {args.count} schedules to {args.out_dir}")


def cmd_simulate(args):
    layout = parse_layout(_read(args.lot))
    schedule = parse_schedule(_read(args.schedule))
    placement = simulate_parking(layout, schedule, ParkingRules(), seed=args.seed)
    _write(args.out, serialize_placement(placement))
    print(f"parked {len(placement.assignments)} EVs, skipped {len(placement.skipped)} vehicles")


def cmd_charge(args):
    layout = parse_layout(_read(args.lot))
    schedule = parse_schedule(_read(args.schedule))
    placement = parse_placement(_read(args.placement))
    capacity = args.capacity if args.capacity is not None else math.inf
    config = ChargeConfig(slot_minutes=args.slot_minutes, network_capacity=capacity)
    profile = best_schedule(layout, schedule, placement, config)
    _write(args.out, serialize_stats(compute_stats(profile, config)))
    if args.profile_out:
        _write(args.profile_out, serialize_profile(profile, config))
    print(f"wrote stats for {len(profile.evses)} EVSEs to {args.out}")


def cmd_featurize(args):
    layout = parse_layout(_read(args.lot))
    stats = {(s.row, s.col): s for s in parse_stats(_read(args.stats))}
    config = FeatureConfig(m=args.m, include_door_distance=args.door_distance)
    dmap = door_distance_map(layout) if args.door_distance else None
    lines = []
    header = [f"f_{i}" for i in range(config.vector_length)] + ["tau_kw", "p_tot_kwh"]
    lines.append(",".join(header))
    for r, c in layout.evse_cells():
        s = stats.get((r, c))
        if s is None:
            raise SystemExit(f"stats file missing EVSE ({r}, {c})")
        vec = extract_features(layout, (r, c), config, distance_map=dmap)
        lines.append(",".join([fmt(v) for v in vec] + [fmt(s.tau_kw), fmt(s.p_tot_kwh)]))
    _write(args.out, "\n".join(lines) + "\n")
    print(f"wrote {len(layout.evse_cells())} feature rows to {args.out}")


def _pipeline_config(args) -> PipelineConfig:
    if args.config:
        with open(args.config) as f:
            raw = json.load(f)
        raw.setdefault("master_seed", args.seed)
        return PipelineConfig.from_dict(raw)
    return PipelineConfig(master_seed=args.seed)


def cmd_dataset(args):
    config = _pipeline_config(args)
    run_dataset(config, args.out_dir, jobs=args.jobs)
    print(f"dataset written to {args.out_dir}")


def cmd_train(args):
    overrides = {"seed": args.seed}
    if args.epochs is not None:
        overrides["epochs"] = args.epochs
    config = config_for_model(args.model_id, m=args.m, **overrides)
    feat_cfg = feature_config_for_model(args.model_id, m=args.m)
    x, y, _ = load_dataset(args.data, config.input_size)
    if args.val_data:
        xv, yv, _ = load_dataset(args.val_data, config.input_size)
    else:
        xv = yv = None
    from .mlp import save_model

    model, history = train(x, y, config, features=feat_cfg, x_val=xv, y_val_raw=yv)
    save_model(model, args.out_model)
    if args.history_out:
        with open(args.history_out, "w") as f:
            f.write("epoch,train_mse,val_mse\n")
            for epoch, tr, va in history:
                f.write(f"{epoch},{fmt(tr)},{fmt(va)}\n")
    print(f"final train MSE {history[-1][1]:.6f}")


def cmd_eval(args):
    model = load_model(args.model)
    x, y_raw, _ = load_dataset(args.data, model.config.input_size)
    pred_t = forward(model, x)
    y_t = transform_targets(y_raw, model.config)
    pred_raw = inverse_transform(pred_t, model.config)
    names = ["tau", "p_tot"]
    for j, name in enumerate(names):
        t_mse = mse(pred_t[:, j], y_t[:, j])
        r_mse = mse(pred_raw[:, j], y_raw[:, j])
        print(f"{name}: transformed-space MSE {t_mse:.6f}, physical-space MSE {r_mse:.6f}")


def cmd_predict(args):
    from .service import predict_layout

    model = load_model(args.model)
    layout = parse_layout(_read(args.lot))
    print("row,col,tau_kw,p_tot_kwh,reachable")
    for e in predict_layout(model, layout):
        print(f"{e.row},{e.col},{fmt(e.tau_kw)},{fmt(e.p_tot_kwh)},{str(e.reachable).lower()}")


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(args.model), host=args.bind, port=args.port)


COMMANDS = {
    "gen-lots": cmd_gen_lots,
    "gen-schedules": cmd_gen_schedules,
    "simulate": cmd_simulate,
    "charge": cmd_charge,
    "featurize": cmd_featurize,
    "dataset": cmd_dataset,
    "train": cmd_train,
    "eval": cmd_eval,
    "predict": cmd_predict,
    "serve": cmd_serve,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    COMMANDS[args.command](args)


if __name__ == "__main__":
    main()
