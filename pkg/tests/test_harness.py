import filecmp

import pytest

from oceansim.config import ScenarioConfig
from oceansim.harness import (BUILDERS, MALICIOUS_GRID, PAUSE_GRID,
                              THRESHOLD_ROWS, ExperimentError,
                              build_compare_dsr, build_sweep_malicious,
                              build_sweep_threshold, run_experiment, validate,
                              write_outputs)

TINY = ScenarioConfig(sim_duration=12.0, n_nodes=10, n_connections=4,
                      start_window=2.0)


def tiny_experiment(n_points=2):
    exp = build_compare_dsr(TINY)
    return type(exp)(exp.name, exp.base, exp.swept, exp.points[:n_points])


def test_malicious_sweep_covers_the_full_grid():
    exp = build_sweep_malicious()
    assert exp.swept == ("malicious_fraction", "pause_time")
    assert len(exp.points) == 21
    assert exp.points[0] == (0.0, 0.0)
    assert exp.points[-1] == (0.75, 1000.0)
    assert {f for f, _ in exp.points} == set(MALICIOUS_GRID)
    assert {p for _, p in exp.points} == set(PAUSE_GRID)


def test_threshold_sweep_prepends_a_clean_baseline():
    exp = build_sweep_threshold()
    assert len(exp.points) == 3 + 6 * 2 * 3
    for point in exp.points[:3]:
        assert point[:4] == (-40.0, 30.0, -30.0, 0.0)
    rows = {point[:3] for point in exp.points[3:]}
    assert rows == set(THRESHOLD_ROWS)
    assert {point[3] for point in exp.points[3:]} == {0.25, 0.5}


def test_compare_experiment_pairs_each_fraction_with_both_modes():
    exp = build_compare_dsr()
    assert exp.base.pause_time == 400.0
    assert len(exp.points) == 8
    assert exp.points[0] == (0.0, True)
    assert exp.points[1] == (0.0, False)


def test_builder_registry_names_match():
    for name, builder in BUILDERS.items():
        assert builder().name == name


def test_config_at_applies_only_the_swept_fields():
    exp = build_sweep_malicious(TINY)
    cfg = exp.config_at((0.25, 400.0))
    assert (cfg.malicious_fraction, cfg.pause_time) == (0.25, 400.0)
    assert cfg.sim_duration == TINY.sim_duration


def test_run_experiment_orders_points_and_seeds():
    res = run_experiment(tiny_experiment(), base_seed=3, n_runs=2)
    assert [p.values["ocean_enabled"] for p in res.points] == [True, False]
    for point in res.points:
        assert [r["seed"] for r in point.runs] == [3, 4]
        mean, std = point.stats["throughput_pct"]
        assert mean is not None and std is not None


def test_seed_and_run_counts_default_to_the_base_config():
    exp = tiny_experiment(1)
    exp = type(exp)(exp.name, ScenarioConfig(**{**TINY.to_dict(),
                                                "base_seed": 9, "n_runs": 1,
                                                "pause_time": 400.0}),
                    exp.swept, exp.points)
    res = run_experiment(exp)
    assert res.base_seed == 9 and res.n_runs == 1
    assert res.points[0].runs[0]["seed"] == 9
    assert res.points[0].stats["throughput_pct"][1] is None   # lone run, no std


def test_stat_filters_to_a_unique_point():
    res = run_experiment(tiny_experiment(), base_seed=1, n_runs=1)
    assert res.stat("routing_packets", ocean_enabled=False) >= 0
    with pytest.raises(KeyError):
        res.stat("routing_packets", malicious_fraction=0.0)   # matches both


def test_failing_run_aborts_and_names_the_culprit():
    bad = ScenarioConfig(sim_duration=5.0, n_nodes=2, n_connections=5)
    exp = build_compare_dsr(bad)
    with pytest.raises(ExperimentError) as err:
        run_experiment(exp, base_seed=1, n_runs=1)
    assert "seed 1" in str(err.value)
    assert "compare-dsr" in str(err.value)


def test_outputs_are_complete_and_reproducible(tmp_path):
    res = run_experiment(tiny_experiment(), base_seed=1, n_runs=2)
    first = write_outputs(res, tmp_path / "a")
    again = write_outputs(run_experiment(tiny_experiment(), base_seed=1, n_runs=2),
                          tmp_path / "b")
    names = [p.name for p in first]
    assert names[:2] == ["compare_dsr.csv", "compare_dsr_runs.csv"]
    assert "compare_dsr_avg_delay.gp" in names
    for one, two in zip(first, again):
        assert filecmp.cmp(one, two, shallow=False), one.name


def test_worker_pool_output_matches_serial(tmp_path):
    serial = run_experiment(tiny_experiment(), base_seed=1, n_runs=2, jobs=1)
    pooled = run_experiment(tiny_experiment(), base_seed=1, n_runs=2, jobs=2)
    write_outputs(serial, tmp_path / "serial")
    write_outputs(pooled, tmp_path / "pooled")
    for name in ("compare_dsr.csv", "compare_dsr_runs.csv"):
        assert filecmp.cmp(tmp_path / "serial" / name,
                           tmp_path / "pooled" / name, shallow=False)


def test_csv_headers_carry_the_generating_config(tmp_path):
    res = run_experiment(tiny_experiment(1), base_seed=2, n_runs=1)
    path = write_outputs(res, tmp_path)[0]
    head = path.read_text().splitlines()[:4]
    assert head[0].startswith("# generator: oceansim")
    assert head[1] == "# experiment: compare-dsr"
    assert head[2] == "# base_seed: 2  n_runs: 1"
    assert '"sim_duration":12.0' in head[3].replace(" ", "")


def test_absent_statistics_become_empty_cells(tmp_path):
    # two nodes far apart: traffic flows but nothing is ever delivered
    lonely = ScenarioConfig(sim_duration=8.0, n_nodes=2, n_connections=1,
                            arena_width=5000.0, arena_height=5000.0,
                            pause_time=1e9, start_window=1.0)
    exp = build_compare_dsr(lonely)
    exp = type(exp)(exp.name, exp.base, exp.swept, exp.points[:1])
    res = run_experiment(exp, base_seed=4, n_runs=1)
    assert res.points[0].stats["avg_delay"] == (None, None)
    agg = write_outputs(res, tmp_path)[0].read_text().splitlines()
    data = agg[-1]
    assert ",," in data                      # empty mean/std cells survive


def test_validation_suite_passes_and_reports():
    lines = []
    assert validate(write=lines.append) == 0
    assert lines[-1] == "5/5 checks passed"
    assert sum(1 for l in lines if l.startswith("ok")) == 5
