import json

import pytest

import sbqa
from sbqa.tables import SchemaError


def run(tmp_path, command, config):
    path = tmp_path / f"{command}.json"
    path.write_text(json.dumps(config))
    return sbqa.run_cli([command, "--config", str(path), "--out", str(tmp_path / "out")])


def test_spectrum_table(tmp_path):
    assert run(tmp_path, "spectrum", {"model": "ising", "grid_points": 21}) == 0
    t = sbqa.read_spectrum(tmp_path / "out" / "spectrum.csv")
    assert len(t["s"]) == 21
    assert t["relevant_gap"][0] == pytest.approx(2.0)
    assert t["O"][-1] == pytest.approx(-1.0)


def test_sweep_and_trace_tables(tmp_path):
    config = {"model": "ising", "T_list": [10, 3], "trace_T": [3], "trace_samples": 5}
    assert run(tmp_path, "sweep", config) == 0
    t = sbqa.read_sweep(tmp_path / "out" / "sweep.csv")
    assert t["T"] == [3.0, 10.0]
    assert t["steps_per_unit"] == [200, 200]
    assert t["flags"] == [[], []]
    trace = sbqa.read_trace(tmp_path / "out" / "trace_ising_T3.csv")
    assert len(trace["t"]) == 5
    for row in zip(trace["solution"], trace["excited_solution"], trace["spin_error"],
                   trace["other"]):
        assert sum(row) <= 1.0 + 1e-8


def test_levels_table(tmp_path):
    config = {"model": "spinboson", "omega": 3, "n_max": 3, "classify_s": [0.0, 1.0]}
    assert run(tmp_path, "classify", config) == 0
    t = sbqa.read_levels(tmp_path / "out" / "levels.csv")
    end = [label for s, i, label in zip(t["s"], t["index"], t["label"]) if s == 1.0 and i < 6]
    assert end == ["solution"] * 6


def test_invalid_config_exit_code(tmp_path):
    assert run(tmp_path, "spectrum", {"modle": "ising"}) == 2


def test_schema_violation(tmp_path):
    bad = tmp_path / "sweep.csv"
    bad.write_text("T,p_error\n1,0.5\n")
    with pytest.raises(SchemaError):
        sbqa.read_sweep(bad)
