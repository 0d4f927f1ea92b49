import json

import pytest

from mortonrrt.bench import COLUMNS
from mortonrrt.cli import main
from mortonrrt.collision import validate_path
from mortonrrt.scenario import SpaceTimePoint, load_scenario

SMALL = ["--edge", "30", "--timesteps", "10", "--obstacles", "3", "--trials", "1", "--max-iters", "20000"]


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "s.json"
    assert main(["gen", "--edge", "30", "--timesteps", "10", "--obstacles", "3", "--seed", "4", "--out", str(path)]) == 0
    return path


def test_gen_writes_loadable_scenario(scenario_file):
    s = load_scenario(str(scenario_file))
    assert s.edge_length == 30 and s.timesteps == 10 and s.n_obstacles == 3


@pytest.mark.parametrize("variant", ["baseline", "sw-morton", "hw-morton"])
def test_plan(scenario_file, tmp_path, variant):
    out = tmp_path / "plan.json"
    rc = main(["plan", "--scenario", str(scenario_file), "--variant", variant, "--seed", "3", "--out", str(out)])
    doc = json.loads(out.read_text())
    assert rc == 0 and doc["success"]
    path = [SpaceTimePoint(*p) for p in doc["path"]]
    assert validate_path(path, load_scenario(str(scenario_file)))
    assert doc["stats"]["iterations"] > 0


def test_bench_csv_and_reproducibility(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["bench", *SMALL, "--k", "18", "--scale", "4", "--out", str(a)]) == 0
    assert main(["bench", *SMALL, "--k", "18", "--scale", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert sum(1 for ln in lines[1:] if not ln.startswith("#")) == 3


def test_bench_variant_filter_and_cost_model(tmp_path):
    costs = tmp_path / "costs.json"
    costs.write_text(json.dumps({"store_sw_op": 5}))
    out = tmp_path / "o.csv"
    rc = main(["bench", *SMALL, "--variant", "baseline", "--variant", "sw-morton", "--cost-model", str(costs), "--out", str(out)])
    assert rc == 0
    body = [ln for ln in out.read_text().splitlines()[1:] if not ln.startswith("#")]
    assert len(body) == 2


def test_profile(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["profile", *SMALL, "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("config,store_share\nl30_T10_L3,")
    assert "# geomean_store_share," in text


def test_bad_scenario_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"edge_length": 10}))
    assert main(["plan", "--scenario", str(bad)]) == 2
    assert "timesteps" in capsys.readouterr().err


def test_bad_cost_model_exit_code(tmp_path):
    costs = tmp_path / "c.json"
    costs.write_text(json.dumps({"nope": 1}))
    assert main(["bench", *SMALL, "--cost-model", str(costs)]) == 2


def test_bad_flag_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["plan"])
    assert exc.value.code != 0
