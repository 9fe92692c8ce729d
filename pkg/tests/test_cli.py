from __future__ import annotations

import csv
import json

import pytest
from click.testing import CliRunner

from artifact.cli import CSV_COLUMNS, ExperimentConfig, lucas_table, main, run_gallery, strip_timestamp


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args):
    res = runner.invoke(main, list(args))
    doc = json.loads(res.output) if res.output.strip().startswith("{") else None
    return res, doc


def test_torsion(runner):
    res, doc = run(runner, "torsion", "--a", "T^2")
    assert res.exit_code == 0, res.output
    r = doc["result"]
    assert r["module_side_size"] == r["lie_side_size"] == 4
    assert r["exp_consistency"]["pass"]
    assert min(r["certified_digits"]) >= 40


def test_torsion_tensor(runner):
    res, doc = run(runner, "torsion", "--module", "C^2", "--a", "T")
    assert res.exit_code == 0
    assert doc["result"]["module_side_size"] == 2


def test_count_carlitz_rows(runner, tmp_path):
    out = tmp_path / "eps.csv"
    res, doc = run(runner, "count", "--module", "carlitz", "--a", "T", "--a", "T^2", "--a", "T^3",
                   "--epsilon-report", str(out))
    assert res.exit_code == 0, res.output
    rows = doc["result"]["rows"]
    assert [r["N_bracket"] for r in rows] == [2, 4, 8]
    with open(out, newline="") as fh:
        reader = csv.DictReader(fh)
        assert reader.fieldnames == CSV_COLUMNS
        table = list(reader)
    assert [r["N_bracket"] for r in table] == ["2", "4", "8"]
    assert all(r["pass/fail"] == "pass" for r in table)


def test_count_documented_invocation(runner, tmp_path):
    out = tmp_path / "out.csv"
    res, _ = run(runner, "count", "--module", "carlitz", "--a", "T^3+T", "--delta", "2",
                 "--epsilon-report", str(out))
    assert res.exit_code == 0
    (row,) = list(csv.DictReader(open(out, newline="")))
    assert row["a"] == "T^3 + T" and row["|a|"] == "8" and row["N_bracket"] == "8"


def test_count_empty_list(runner, tmp_path):
    out = tmp_path / "empty.csv"
    res, doc = run(runner, "count", "--epsilon-report", str(out))
    assert res.exit_code == 0
    assert doc["result"]["rows"] == []
    assert open(out).read().strip() == ",".join(CSV_COLUMNS)


def test_count_guard_names_limit(runner):
    res = runner.invoke(main, ["count", "--a", "T^13"])
    assert res.exit_code == 2
    assert "guard" in res.output and "10000000" in res.output and "T^13" in res.output


def test_count_unknown_preset(runner):
    res = runner.invoke(main, ["count", "--module", "nope", "--a", "T"])
    assert res.exit_code == 2


def test_ift_solve(runner, tmp_path):
    series = {"q": 2, "n": 2, "D": 6, "terms": [
        {"mu": [1, 0], "c": "1"}, {"mu": [0, 1], "c": "1"}, {"mu": [0, 2], "c": "1"}]}
    path = tmp_path / "series.json"
    path.write_text(json.dumps(series))
    res, doc = run(runner, "ift", "solve", "--degree", "6", "--input", str(path))
    assert res.exit_code == 0, res.output
    r = doc["result"]
    assert r["residual_zero"] and r["certificate"]["dominated"]
    # z + w + w^2 = 0 gives h = z + h^2 in characteristic 2, so h = z + z^2 + z^4 + ...
    h = {tuple(t["mu"]): t["c"] for t in r["h"]["terms"]}
    assert h == {(1,): "q=2;[1]/[1]", (2,): "q=2;[1]/[1]", (4,): "q=2;[1]/[1]"}


def test_ift_random(runner):
    res, doc = run(runner, "--seed", "3", "ift", "random", "--count", "3", "--degree", "8")
    assert res.exit_code == 0
    assert len(doc["result"]["instances"]) == 3
    assert doc["seed"] == 3


def test_exp(runner):
    res, doc = run(runner, "exp", "--module", "C^2", "--order", "2")
    assert res.exit_code == 0
    assert doc["result"]["functional_equation"]
    res, doc = run(runner, "exp", "--module", "carlitz", "--order", "4")
    assert res.exit_code == 0 and doc["result"]["closed_forms"]


def test_submodule_scan(runner):
    res, doc = run(runner, "submodule", "scan", "--module", "C^2", "--q", "2", "--jmax", "8")
    assert res.exit_code == 0
    r = doc["result"]
    assert r["candidates"] == ["0 x G_a"] and r["j_empirical"] == 2
    assert len(r["table"]) == 16


def test_submodule_families_and_congruence(runner):
    res, doc = run(runner, "submodule", "families", "--m", "4")
    assert res.exit_code == 0 and len(doc["result"]["rows"]) == 2
    res, doc = run(runner, "submodule", "congruence", "--j", "7", "--m", "3")
    assert res.exit_code == 0 and doc["result"]["condition"]


def test_gallery(runner):
    res, doc = run(runner, "gallery")
    assert res.exit_code == 0
    rows = doc["result"]["checks"]["isogeny_graph"]
    assert rows["P=identity"]["stabilized"] and rows["P=tau"]["stabilized"]
    res, _ = run(runner, "gallery", "--isogeny", "identity")
    assert res.exit_code == 0


def test_run_gallery_and_lucas():
    assert run_gallery()["pass"]
    t = lucas_table()
    assert t["holds"] and t["primes"] == [2, 3] and t["hmax"] == 64


def test_deterministic_json(runner):
    _, a = run(runner, "--seed", "7", "submodule", "scan", "--jmax", "4")
    _, b = run(runner, "--seed", "7", "submodule", "scan", "--jmax", "4")
    assert "timestamp" in a
    assert json.dumps(strip_timestamp(a), sort_keys=True) == json.dumps(strip_timestamp(b), sort_keys=True)


def test_output_file(runner, tmp_path):
    out = tmp_path / "res.json"
    res = runner.invoke(main, ["--output", str(out), "submodule", "congruence", "--j", "4", "--m", "2"])
    assert res.exit_code == 0 and res.output == ""
    assert json.loads(out.read_text())["pass"] is True


def test_config_round_trip():
    cfg = ExperimentConfig(seed=5, count={"a": ["T", "T^2", "T^3"], "delta": 1},
                           submodule={"scan": {"module": "C^4", "jmax": 6}})
    again = ExperimentConfig.from_toml(cfg.to_toml())
    assert again == cfg
    dm = again.default_map()
    assert dm["count"] == {"a_list": ["T", "T^2", "T^3"], "delta": 1}
    assert dm["submodule"] == {"scan": {"module_name": "C^4", "jmax": 6}}


def test_config_rejects_unknown_tables():
    with pytest.raises(ValueError):
        ExperimentConfig.from_toml("[bogus]\nx = 1\n")


def test_config_drives_count(runner, tmp_path):
    cfg = tmp_path / "exp.toml"
    cfg.write_text('seed = 11\n[count]\nmodule = "carlitz"\na = ["T", "T^2", "T^3"]\n')
    res, doc = run(runner, "--config", str(cfg), "count")
    assert res.exit_code == 0, res.output
    assert doc["seed"] == 11
    assert [r["N_bracket"] for r in doc["result"]["rows"]] == [2, 4, 8]


def test_failing_verdict_exit_code(runner, tmp_path):
    # F = z + w^2 has dF/dw = 0, so the hypotheses fail and the verdict is a fail
    series = {"q": 2, "n": 2, "D": 4, "terms": [{"mu": [1, 0], "c": "1"}, {"mu": [0, 2], "c": "1"}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(series))
    res, doc = run(runner, "ift", "solve", "--degree", "4", "--input", str(path))
    assert res.exit_code == 1
    assert doc["pass"] is False and "hypothesis" in doc["result"]["error"]
