import csv
import io
import json
import math
from fractions import Fraction

from click.testing import CliRunner

from sumcontainers import cli, verify
from sumcontainers.store import config_hash, dumps, load, loads, make_record, persist


def test_round_trip_exotic_values(tmp_path):
    store = tmp_path / "r.jsonl"
    rec = make_record("census", {"big": 3 ** 90, "neg": -(2 ** 70), "inf": math.inf,
                                 "ninf": -math.inf, "frac": Fraction(5, 2), "nested": [1, (2, 3)]},
                      {"n": 5})
    persist(rec, store)
    (back,) = load(store)
    assert back["data"]["big"] == 3 ** 90 and back["data"]["neg"] == -(2 ** 70)
    assert back["data"]["inf"] == math.inf and back["data"]["ninf"] == -math.inf
    assert back["data"]["frac"] == Fraction(5, 2)
    assert back["data"]["nested"] == [1, [2, 3]]
    assert back["bounds_version"] == "1"


def test_nan_survives():
    back = loads(dumps({"x": math.nan}))
    assert math.isnan(back["x"])


def test_config_hash_stable():
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_filter_and_corrupt_lines(tmp_path, caplog):
    store = tmp_path / "r.jsonl"
    persist(make_record("census", {"s": 3}, {}), store)
    with store.open("a") as fh:
        fh.write("{not json\n\n")
    persist(make_record("census", {"s": 4}, {}), store)
    persist(make_record("verify", {"s": 4}, {}), store)
    assert len(load(store)) == 3
    assert "corrupt" in caplog.text
    assert [r["data"]["s"] for r in load(store, {"kind": "census"})] == [3, 4]
    assert len(load(store, {"s": 4})) == 2
    assert load(store, {"missing": 1}) == []


def run(*args, **kw):
    return CliRunner().invoke(cli.main, list(args), **kw)


def test_census_text_and_store(tmp_path):
    store = tmp_path / "s.jsonl"
    res = run("--store", str(store), "census", "--group", "z:5", "--s", "3", "--K", "2", "--oracle")
    assert res.exit_code == 0, res.output
    assert "10" in res.output
    (rec,) = load(store)
    assert rec["kind"] == "census"


def test_census_jsonl_and_csv():
    res = run("census", "--group", "z:12", "--s", "4", "--K", "3", "--format", "jsonl")
    assert res.exit_code == 0
    row = json.loads(res.output.splitlines()[0])
    assert row["count"] == 495 and row["K"] == "3"
    res = run("census", "--group", "zmod:3x3", "--s", "3", "--K", "2", "--format", "csv")
    assert res.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert rows[0]["group"] == "zmod:3x3"


def test_output_file(tmp_path):
    out = tmp_path / "o.jsonl"
    res = run("apcover", "--B", "1,3,5,9,20", "--max-outliers", "1", "--format", "jsonl", "--out", str(out))
    assert res.exit_code == 0
    row = json.loads(out.read_text().splitlines()[0])
    assert row["length"] == 5 and row["difference"] == 2


def test_usage_errors_exit_2():
    assert run("census", "--group", "q:5", "--s", "3", "--K", "2").exit_code == 2
    assert run("census", "--group", "z:5", "--s", "3", "--K", "two").exit_code == 2
    assert run("census", "--group", "z:5", "--s", "3").exit_code == 2
    assert run("supersat", "--group", "z:5", "--A", "1", "--B", "1,2", "--epsilon", "1/10", "--K", "2").exit_code == 2


def test_domain_error_exit_2():
    res = run("lowerbound", "--n", "20", "--s", "1", "--K", "8")
    assert res.exit_code == 2


def test_resource_error_exit_3():
    res = run("census", "--group", "z:30", "--s", "10", "--K", "3", "--cap", "1000")
    assert res.exit_code == 3


def test_verify_failure_exit_1(monkeypatch):
    bad = verify.SuiteResult("fake", False, 1, ["boom"], 0.0, {"failed": 1})
    monkeypatch.setattr(verify, "run_suites", lambda **kw: [bad])
    res = run("verify", "--only", "pollard")
    assert res.exit_code == 1
    assert "FAIL" in res.output


def test_verify_quick_passes():
    res = run("verify", "--only", "census", "--only", "apcover", "--format", "jsonl")
    assert res.exit_code == 0, res.output
    assert [json.loads(l)["passed"] for l in res.output.splitlines()] == [True, True]


def test_other_commands_run(tmp_path):
    assert run("typicality", "--n", "12", "--s", "3", "--K", "2", "--tmax", "0", "--pmax", "5").exit_code == 0
    assert run("lowerbound", "--n", "100", "--s", "8", "--K", "8", "--sample", "5").exit_code == 0
    assert run("lowerbound", "--group", "zmod:9", "--m", "9", "--s", "3", "--l", "2", "--verify-all").exit_code == 0
    res = run("supersat", "--group", "z:10", "--A", "2,3,4", "--B", "1,2,3,4,5,6,7,8,9,10", "--epsilon", "1/10")
    assert res.exit_code == 0, res.output
    tree = tmp_path / "tree.json"
    res = run("containers", "--group", "z:8", "--s", "3", "--K", "2", "--verify", "--dump-tree", str(tree))
    assert res.exit_code == 0, res.output
    assert json.loads(tree.read_text())["depth"] == 0
