import json

import pytest

from switchreach import (
    BoundExperimentConfig,
    is_controllable,
    run_bound_experiment,
    sample_system,
    shortest_controllable_sequences,
    validate,
)
from switchreach.bounds import cell_bound, config_from_json


class TestSampleSystem:
    def test_deterministic_for_fixed_seed(self):
        a = sample_system(3, 2, "at_least", 1, 2, seed=99)
        b = sample_system(3, 2, "at_least", 1, 2, seed=99)
        assert a == b
        c = sample_system(3, 2, "at_least", 1, 2, seed=100)
        assert a != c

    def test_invertible_dynamics(self):
        for seed in range(10):
            sys_ = sample_system(4, 3, "any", 0, 2, seed=seed)
            assert validate(sys_).all_a_invertible

    def test_exact_rank_zero_never_controllable(self):
        sys_ = sample_system(3, 2, "exact", 0, 2, seed=1)
        assert all(mode.B.ncols == 0 for mode in sys_.modes)
        assert not is_controllable(sys_)

    def test_exact_full_rank_one_step(self):
        sys_ = sample_system(3, 2, "exact", 3, 2, seed=2)
        assert all(mode.B.rank() == 3 for mode in sys_.modes)
        result = shortest_controllable_sequences(sys_)
        assert result.shortest_length == 1

    def test_exact_rank_verified(self):
        for seed in range(8):
            sys_ = sample_system(4, 2, "exact", 2, 2, seed=seed)
            assert all(mode.B.rank() == 2 for mode in sys_.modes)

    def test_at_least_rank_met(self):
        for seed in range(8):
            sys_ = sample_system(4, 2, "at_least", 2, 2, seed=seed)
            assert all(mode.B.rank() >= 2 for mode in sys_.modes)


class TestCellBound:
    def test_rank_zero_uses_global_bound(self):
        assert cell_bound(4, 0, 3, "at_least") == 10

    def test_rank_dependent(self):
        assert cell_bound(4, 1, 2, "at_least") == 7
        assert cell_bound(4, 3, 2, "at_least") == 2  # r = n-1
        assert cell_bound(3, 1, 2, "at_least") == 4  # the (3,1) special value
        assert cell_bound(3, 1, 1, "at_least") == 4  # (n-r+1)(n-r)/2+1 = 4 too


class TestRunBoundExperiment:
    @pytest.fixture(scope="class")
    def small_report(self):
        cfg = BoundExperimentConfig(
            n_values=(2, 3), m_values=(1, 2, 3), samples=8, seed=7
        )
        return cfg, run_bound_experiment(cfg)

    def test_zero_violations(self, small_report):
        _, report = small_report
        assert report.total_violations == 0

    def test_max_lengths_respect_bounds(self, small_report):
        _, report = small_report
        for cell in report.cells:
            if cell.max_len is not None:
                assert cell.max_len <= cell.bound

    def test_planted_instances_hit_expected_lengths(self, small_report):
        _, report = small_report
        planted = [c for c in report.cells if c.planted_len is not None]
        assert planted
        for cell in planted:
            assert cell.planted_len == cell.planted_expected

    def test_planted_equality_cells_reach_bound(self):
        # with m >= n - r the planted instance meets the bound exactly
        cfg = BoundExperimentConfig(
            n_values=(4,), r_values=(1,), m_values=(4,), samples=0, seed=0
        )
        report = run_bound_experiment(cfg)
        (cell,) = report.cells
        assert cell.tightness == "proven"
        assert cell.planted_len == cell.bound == 7

    def test_unproven_cells_marked(self, small_report):
        _, report = small_report
        marks = {(c.n, c.r, c.m): c.tightness for c in report.cells}
        assert marks[(3, 1, 1)] == "unproven-tight"
        assert marks[(3, 2, 2)] == "proven"

    def test_deterministic_up_to_timing(self, small_report):
        cfg, report = small_report
        again = run_bound_experiment(cfg)

        def strip_times(r):
            doc = json.loads(r.to_json())
            for cell in doc["cells"]:
                cell.pop("wall_time_s")
            return doc

        assert strip_times(report) == strip_times(again)

    def test_json_schema_keys(self, small_report):
        _, report = small_report
        doc = json.loads(report.to_json())
        assert "cells" in doc
        required = {
            "n",
            "r",
            "m",
            "samples",
            "controllable",
            "max_len",
            "bound",
            "violations",
            "histogram",
        }
        for cell in doc["cells"]:
            assert required <= set(cell)
            assert cell["violations"] == []
            assert all(isinstance(k, str) for k in cell["histogram"])
            assert sum(cell["histogram"].values()) == cell["controllable"]

    def test_text_table_renders(self, small_report):
        _, report = small_report
        table = report.to_text_table()
        assert "total violations: 0" in table
        assert "tightness" in table

    def test_config_round_trip(self):
        text = json.dumps(
            {
                "n": [2, 3],
                "r": [0, 1],
                "m": [2],
                "samples": 3,
                "entry_bound": 1,
                "seed": 5,
                "rank_mode": "exact",
                "plant_extremal": False,
            }
        )
        cfg = config_from_json(text)
        assert cfg.n_values == (2, 3)
        assert cfg.r_values == (0, 1)
        assert cfg.samples == 3
        assert cfg.rank_mode == "exact"
        assert not cfg.plant_extremal

    def test_bad_rank_mode_rejected(self):
        with pytest.raises(ValueError):
            BoundExperimentConfig(rank_mode="sometimes")
