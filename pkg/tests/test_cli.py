import json
import os

import pytest

from evlot.cli import main
from evlot.grid import parse_layout, parse_schedule, parse_stats


TINY_CONFIG = {
    "n_train_layouts": 2,
    "n_val_layouts": 1,
    "schedules_per_layout": 2,
    "lot": {"height": 8, "width": 8, "n_evses": 3},
    "schedule": {"n_evs": 5, "n_cars": 5},
    "charge": {"slot_minutes": 30.0, "network_capacity": "inf"},
    "features": {"m": 3, "include_door_distance": True},
}


class TestEndToEndChain:
    def test_full_pipeline(self, tmp_path, capsys):
        lots = tmp_path / "lots"
        scheds = tmp_path / "scheds"
        main(["--seed", "11", "gen-lots", "--height", "8", "--width", "8",
              "--evses", "3", "--count", "2", "--out-dir", str(lots)])
        main(["--seed", "11", "gen-schedules", "--evs", "5", "--cars", "5",
              "--count", "1", "--out-dir", str(scheds)])
        lot_path = lots / "lot_0.txt"
        sched_path = scheds / "schedule_0.csv"
        layout = parse_layout(lot_path.read_text())
        assert layout.height == 8 and len(layout.evse_cells()) == 3
        schedule = parse_schedule(sched_path.read_text())
        assert len(schedule.events) == 10

        placement_path = tmp_path / "placement.csv"
        main(["--seed", "11", "simulate", "--lot", str(lot_path),
              "--schedule", str(sched_path), "--out", str(placement_path)])
        assert placement_path.exists()

        stats_path = tmp_path / "stats.csv"
        profile_path = tmp_path / "profile.csv"
        main(["charge", "--lot", str(lot_path), "--schedule", str(sched_path),
              "--placement", str(placement_path), "--slot-minutes", "30",
              "--out", str(stats_path), "--profile-out", str(profile_path)])
        stats = parse_stats(stats_path.read_text())
        assert len(stats) == 3
        assert profile_path.read_text().startswith("row,col,t0,")

        feats_path = tmp_path / "features.csv"
        main(["featurize", "--lot", str(lot_path), "--stats", str(stats_path),
              "--m", "3", "--door-distance", "--out", str(feats_path)])
        header = feats_path.read_text().split("\n")[0].split(",")
        assert header[-2:] == ["tau_kw", "p_tot_kwh"]
        assert len(header) == 3 * 3 * 5 + 1 + 2

        capsys.readouterr()

    def test_dataset_train_eval_predict(self, tmp_path, capsys):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(TINY_CONFIG))
        data_dir = tmp_path / "data"
        main(["--seed", "2", "--config", str(cfg_path),
              "dataset", "--out-dir", str(data_dir)])
        assert (data_dir / "train.csv").exists()
        assert (data_dir / "manifest.json").exists()

        model_path = tmp_path / "model.json"
        hist_path = tmp_path / "history.csv"
        main(["train", "--data", str(data_dir / "train.csv"),
              "--val-data", str(data_dir / "val.csv"),
              "--model-id", "4", "--m", "3", "--epochs", "3",
              "--out-model", str(model_path), "--history-out", str(hist_path)])
        assert model_path.exists()
        assert len(hist_path.read_text().strip().split("\n")) == 4

        main(["eval", "--model", str(model_path), "--data", str(data_dir / "val.csv")])
        out = capsys.readouterr().out
        assert "tau" in out and "p_tot" in out

        capsys.readouterr()
        main(["predict", "--model", str(model_path),
              "--lot", str(data_dir / "layouts" / "val_lot_0.txt")])
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "row,col,tau_kw,p_tot_kwh,reachable"
        assert len(lines) == 1 + 3
        for line in lines[1:]:
            parts = line.split(",")
            assert len(parts) == 5
            float(parts[2]), float(parts[3])
            assert parts[4] in ("true", "false")


class TestArgumentErrors:
    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])

    def test_missing_required_flag(self):
        with pytest.raises(SystemExit):
            main(["simulate", "--lot", "x.txt"])

    def test_bad_model_id(self):
        with pytest.raises(SystemExit):
            main(["train", "--data", "d.csv", "--model-id", "9", "--out-model", "m.json"])
