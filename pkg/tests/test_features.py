import math

import numpy as np
import pytest

from evlot.features import (FeatureConfig, N_CHANNELS, door_distance, door_distance_map,
                            extract_features, unreachable_sentinel)
from evlot.grid import parse_layout
from evlot.lotgen import LotGenConfig, generate_layout

from conftest import random_layout
from helpers import dijkstra_door_distance


class TestExtractFeatures:
    def test_m3_center_channel(self):
        layout = parse_layout("DRP\nPEP\nPPP")
        vec = extract_features(layout, (1, 1), FeatureConfig(m=3))
        assert vec.shape == (45,)
        # center position is index (1,1) of the window; EVSE channel is 2
        center = (1 * 3 + 1) * N_CHANNELS + 2
        assert vec[center] == 1.0
        # window covers the whole grid: no off-grid channel set
        assert vec[4::5].sum() == 0.0

    def test_corner_off_grid(self):
        layout = parse_layout("ER\nPD")
        vec = extract_features(layout, (0, 0), FeatureConfig(m=3))
        off_grid = vec.reshape(3, 3, 5)[:, :, 4]
        assert off_grid.sum() == 5.0  # top row + left column of the window

    def test_default_lengths(self):
        layout = parse_layout("DRE\nPPP\nPPP")
        assert extract_features(layout, (0, 2), FeatureConfig(m=9)).shape == (405,)
        cfg = FeatureConfig(m=9, include_door_distance=True)
        assert extract_features(layout, (0, 2), cfg).shape == (406,)

    def test_one_hot_everywhere(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            layout = random_layout(rng)
            for evse in layout.evse_cells():
                vec = extract_features(layout, evse, FeatureConfig(m=5))
                window = vec.reshape(5, 5, N_CHANNELS)
                assert np.all(window.sum(axis=2) == 1.0)

    def test_translation_consistency(self):
        layout = parse_layout(
            "PPPPPPPP\n"
            "PREPPREP\n"
            "PPPPPPPP"
        )
        cfg = FeatureConfig(m=3)
        a = extract_features(layout, (1, 2), cfg)
        b = extract_features(layout, (1, 6), cfg)
        assert np.array_equal(a, b)

    def test_requires_evse_center(self):
        layout = parse_layout("DRE\nPPP")
        with pytest.raises(ValueError, match="not an EVSE"):
            extract_features(layout, (1, 1), FeatureConfig(m=3))
        with pytest.raises(ValueError, match="outside"):
            extract_features(layout, (5, 5), FeatureConfig(m=3))

    def test_m_must_be_odd(self):
        with pytest.raises(ValueError):
            FeatureConfig(m=4)


class TestDoorDistance:
    def test_adjacent_to_door(self):
        layout = parse_layout("DE\nPP")
        assert door_distance(layout, (0, 1)) == 1.0

    def test_path_through_roads(self):
        layout = parse_layout("DPP\nRPP\nRRE")
        assert door_distance(layout, (2, 2)) == 4.0

    def test_unreachable_sentinel(self, two_door_lot):
        assert door_distance(two_door_lot, (2, 0)) == unreachable_sentinel(two_door_lot)
        assert unreachable_sentinel(two_door_lot) == 2 * (5 + 5)

    def test_normalized(self):
        layout = parse_layout("DE\nPP")
        assert door_distance(layout, (0, 1), normalize=True) == pytest.approx(1 / 4)

    def test_dijkstra_oracle(self):
        for seed in range(40):
            layout = generate_layout(LotGenConfig(10, 10, 5, seed=seed))
            dmap = door_distance_map(layout)
            for evse in layout.evse_cells():
                expected = dijkstra_door_distance(layout, evse)
                if math.isinf(expected):
                    expected = unreachable_sentinel(layout)
                assert dmap[evse] == expected

    def test_distance_appended_last(self, two_door_lot):
        cfg = FeatureConfig(m=3, include_door_distance=True)
        vec = extract_features(two_door_lot, (4, 2), cfg)
        assert vec[-1] == door_distance(two_door_lot, (4, 2))
