import json

import numpy as np
import pytest

from cfequiv.exceptions import ConfigError, DataError
from cfequiv.kernels import KernelSpec
from cfequiv.sim import (
    ExperimentConfig,
    read_sample_csv,
    run_experiment,
    write_results_csv,
)


def small_config(**overrides):
    base = dict(
        example="E2a",
        kernels=(KernelSpec("stable", 1.0),),
        n=(25,),
        p=(2,),
        trials=30,
        grid=(2.0, 1.7),
        b=1000,
        seed=11,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_defaults_mirror_reference_setup():
    cfg = ExperimentConfig(example="E1a", kernels=(KernelSpec("stable", 1.0),))
    assert cfg.n == (100, 200, 300)
    assert cfg.p == (2, 4, 6)
    assert cfg.trials == 2000
    assert cfg.alpha == 0.05
    assert cfg.b == 5000
    assert cfg.benchmark_param == 3.0
    assert cfg.grid == (5.0, 4.0, 3.0, 2.0, 1.0, 0.0)
    rho_cfg = ExperimentConfig(example="E3b", kernels=(KernelSpec("laplace", 0.25),))
    assert rho_cfg.benchmark_param == 0.8
    assert rho_cfg.grid == (0.84, 0.82, 0.8, 0.75, 0.7, 0.65)


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(example="E9", kernels=(KernelSpec("stable", 1.0),))
    with pytest.raises(ConfigError):
        small_config(trials=0)
    with pytest.raises(ConfigError):
        small_config(grid=())
    with pytest.raises(ConfigError):
        small_config(b=500)
    with pytest.raises(ConfigError):
        small_config(example="E1a", threshold_method="quad")


def test_run_experiment_deterministic_across_jobs():
    from dataclasses import replace

    cfg = small_config()
    r1 = run_experiment(cfg, jobs=1)
    r2 = run_experiment(cfg, jobs=3)
    assert len(r1.cells) == 2
    for a, b in zip(r1.cells, r2.cells):
        assert replace(a, wall_time=0.0) == replace(b, wall_time=0.0)


def test_cell_metadata_and_rates():
    cfg = small_config()
    res = run_experiment(cfg)
    for cell in res.cells:
        assert cell.trials == 30
        assert 0.0 <= cell.rejection_rate <= 1.0
        assert cell.rejection_rate * cell.trials == round(cell.rejection_rate * cell.trials)
        assert cell.delta > 0
        assert cell.q is None  # two-sample design has no second dimension
        assert cell.seed == 11
    # the farther alternative rejects at least as often
    assert res.cells[1].rejection_rate >= res.cells[0].rejection_rate


def test_independence_cells_carry_q():
    cfg = ExperimentConfig(
        example="E3a",
        kernels=(KernelSpec("stable", 1.0),),
        n=(20,),
        p=(2,),
        trials=10,
        grid=(0.8, 0.65),
        b=1000,
        seed=5,
    )
    res = run_experiment(cfg)
    assert all(c.q == 2 for c in res.cells)


def test_null_alternative_orientation_small():
    # monotone trend across the grid at desk scale for the symmetry example
    cfg = ExperimentConfig(
        example="E1a",
        kernels=(KernelSpec("stable", 1.0),),
        n=(60,),
        p=(2,),
        trials=60,
        grid=(5.0, 3.0, 0.0),
        b=1500,
        seed=9,
    )
    rates = [c.rejection_rate for c in run_experiment(cfg).cells]
    assert rates[0] <= rates[1] + 0.1
    assert rates[2] >= rates[1]


def test_cell_failure_aborts_cell_not_run(monkeypatch):
    from cfequiv.samplers import BenchmarkSpec

    original = BenchmarkSpec.draw

    def draw(self, n, rng):
        if self.mu == 1.7:
            raise np.linalg.LinAlgError("synthetic failure")
        return original(self, n, rng)

    monkeypatch.setattr(BenchmarkSpec, "draw", draw)
    res = run_experiment(small_config())
    assert len(res.cells) == 1  # the healthy cell survived
    assert res.cells[0].param == 2.0
    assert len(res.failures) == 1
    assert "param=1.7" in res.failures[0] and "synthetic failure" in res.failures[0]


def test_results_csv_round_trip(tmp_path):
    cfg = small_config()
    res = run_experiment(cfg)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    write_results_csv(res, str(out1))
    write_results_csv(run_experiment(cfg), str(out2))
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().strip().splitlines()
    assert lines[0] == "example,family,gamma,n,p,q,param,delta,rejection_rate,trials,seed"
    assert len(lines) == 3
    cells = lines[1].split(",")
    assert cells[0] == "E2a" and cells[1] == "stable"
    assert cells[2] == "1.000000"
    float(cells[7])  # delta parses


def test_rates_written_exactly_zero_or_one(tmp_path):
    # delta tiny -> never reject; delta huge -> always reject
    cfg = small_config(trials=12)
    res = run_experiment(cfg)
    from dataclasses import replace

    forced = [replace(c, rejection_rate=0.0) for c in res.cells[:1]] + [
        replace(c, rejection_rate=1.0) for c in res.cells[1:]
    ]
    from cfequiv.sim import ExperimentResult

    out = tmp_path / "c.csv"
    write_results_csv(ExperimentResult(config=cfg, cells=tuple(forced)), str(out))
    rows = out.read_text().strip().splitlines()[1:]
    assert rows[0].split(",")[8] == "0.000000"
    assert rows[1].split(",")[8] == "1.000000"
    assert float(rows[0].split(",")[8]) == 0.0
    assert float(rows[1].split(",")[8]) == 1.0


def test_config_json_round_trip(tmp_path):
    payload = {
        "example": "E2a",
        "kernels": [{"family": "stable", "gamma": 1.0}],
        "n": [25],
        "p": [2],
        "trials": 30,
        "grid": [2.0, 1.7],
        "B": 1000,
        "seed": 11,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(payload))
    cfg = ExperimentConfig.from_json(str(path))
    assert cfg == small_config()
    # omitted kernel list falls back to the eight standard CF kernels
    defaulted = ExperimentConfig.from_dict({"example": "E2a"})
    assert len(defaulted.kernels) == 8
    assert {k.family.value for k in defaulted.kernels} == {"stable", "laplace"}
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"kernels": []})


def test_read_sample_csv_plain_and_header(tmp_path):
    plain = tmp_path / "plain.csv"
    plain.write_text("1.0,2.0\n3.0,4.0\n5.5,6.5\n")
    m = read_sample_csv(str(plain))
    assert m.shape == (3, 2)
    headed = tmp_path / "headed.csv"
    headed.write_text("a,b\n1.0,2.0\n3.0,4.0\n")
    m2 = read_sample_csv(str(headed))
    assert m2.shape == (2, 2)
    np.testing.assert_array_equal(m2, [[1.0, 2.0], [3.0, 4.0]])


def test_read_sample_csv_errors(tmp_path):
    nan_file = tmp_path / "nan.csv"
    nan_file.write_text("1.0,2.0\n3.0,NaN\n1.0,1.0\n")
    with pytest.raises(DataError, match="row 2, column 2"):
        read_sample_csv(str(nan_file))
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1.0,2.0\n3.0\n")
    with pytest.raises(DataError, match="ragged row 2"):
        read_sample_csv(str(ragged))
    short = tmp_path / "short.csv"
    short.write_text("x,y\n1.0,2.0\n")
    with pytest.raises(DataError, match="at least 2"):
        read_sample_csv(str(short))
    bad_cell = tmp_path / "bad.csv"
    bad_cell.write_text("1.0,2.0\n3.0,oops\n")
    with pytest.raises(DataError, match="row 2, column 2"):
        read_sample_csv(str(bad_cell))
    wrong_width = tmp_path / "w.csv"
    wrong_width.write_text("1.0,2.0\n3.0,4.0\n")
    with pytest.raises(DataError, match="expected 3 columns"):
        read_sample_csv(str(wrong_width), expected_columns=3)
