import json

import pytest

from hybridgpp.cli import parse_subrange, run
from workflow import OUTPUTS, run_all


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("cli")
    a = run_all(base / "a", threads=1)
    b = run_all(base / "b", threads=3)
    return base, a, b


def test_all_subcommands_succeed(runs):
    _, a, b = runs
    assert set(a.values()) == {0} and set(b.values()) == {0}


@pytest.mark.parametrize("name", OUTPUTS)
def test_outputs_byte_identical_across_threads(runs, name):
    base, _, _ = runs
    assert (base / "a" / name).read_bytes() == (base / "b" / name).read_bytes()


def test_model_widths(runs):
    base, _, _ = runs
    doc = json.loads((base / "a" / "model.json").read_text())
    assert doc["sizes"][0] == 10 + 8 and doc["sizes"][-1] == 2
    assert doc["targets"] == ["gpp", "lai"]


def test_sensor_mismatch_exit_code(runs, capsys):
    base, _, _ = runs
    code = run(["predict", "--model", str(base / "a" / "model.json"), "--pixels", str(base / "a" / "pixels.csv"),
                "--meteo", str(base / "a" / "meteo.csv"), "--sensor", "landsat8", "--out", str(base / "x.csv")])
    assert code == 1
    assert "sentinel2" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert run(["bogus"]) == 2
    assert run(["simulate", "--no-such-flag"]) == 2
    assert run(["gsa", "--subrange", "9:3"]) == 2
    assert run([]) == 2
    assert "usage" in capsys.readouterr().err


def test_runtime_error(tmp_path):
    assert run(["evaluate", "--pred", str(tmp_path / "none.csv"), "--ref", str(tmp_path / "none.csv"),
                "--out", str(tmp_path / "e.json")]) == 1


def test_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 40, "lowlai": 4, "seed": 5, "out_dir": str(tmp_path / "sim")}))
    assert run(["simulate", "--config", str(cfg)]) == 0
    assert len((tmp_path / "sim" / "training.csv").read_text().splitlines()) == 45
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(["simulate", "--config", str(cfg)]) == 2


def test_subrange_parser():
    assert parse_subrange("5:20") == (5.0, 20.0)
    assert parse_subrange(":5")[0] == float("-inf")
    assert parse_subrange("20:")[1] == float("inf")
