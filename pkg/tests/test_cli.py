import json

from translation_lab import cli
from translation_lab.groups import BALL_CAP_ENV


def run(capsys, *argv):
    code = cli.dispatch(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_gallery_toeplitz(capsys):
    code, out = run(capsys, "gallery", "toeplitz", "--R", "20")
    assert code == 0
    doc = json.loads(out)
    assert doc["suites"][0]["name"] == "toeplitz"
    assert doc["suites"][0]["verdict"] == "verified-at-scale"


def test_check_deep_with_config(tmp_path, capsys):
    subset = tmp_path / "nat.json"
    subset.write_text('{"kind": "interval", "lo": 0}')
    code, out = run(capsys, "check", "deep", "--group", "z", "--subset", str(subset), "--r", "3", "--R", "10")
    assert code == 0
    doc = json.loads(out)
    assert doc["suites"][0]["checks"][0]["witnesses"] == ["3"]


def test_op_eq_broken_relation(tmp_path, capsys):
    subset = tmp_path / "nat.json"
    subset.write_text('{"kind": "interval", "lo": 0}')
    code, out = run(
        capsys,
        "op", "eq",
        "--group", "z", "--subset", str(subset),
        "--lhs", "track:(0,{0,1})", "--rhs", "id", "--R", "8",
    )
    assert code == 1
    doc = json.loads(out)
    check = doc["suites"][0]["checks"][0]
    assert check["verdict"] == "falsified"
    assert check["witnesses"][0]["row"] == "0"


def test_op_kept_relation(tmp_path, capsys):
    subset = tmp_path / "nat.json"
    subset.write_text('{"kind": "interval", "lo": 0}')
    code, out = run(
        capsys,
        "op", "eq",
        "--group", "z", "--subset", str(subset),
        "--lhs", "track:(0,{0,-1})", "--rhs", "id", "--R", "8",
    )
    assert code == 0


def test_unknown_subcommand_usage_error(capsys):
    assert cli.dispatch(["frobnicate"]) == cli.EXIT_USAGE


def test_malformed_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = cli.dispatch(["check", "deep", "--group", str(bad), "--subset", str(bad)])
    assert code == cli.EXIT_CONFIG


def test_unknown_builtin_is_config_error(tmp_path, capsys):
    code = cli.dispatch(["check", "deep", "--group", "no-such-group", "--subset", "x.json"])
    assert code == cli.EXIT_CONFIG


def test_resource_cap(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(BALL_CAP_ENV, "5")
    subset = tmp_path / "cone.json"
    subset.write_text('{"kind": "positive-cone"}')
    code = cli.dispatch(["check", "deep", "--group", "f2", "--subset", str(subset), "--r", "2", "--R", "6"])
    assert code == cli.EXIT_RESOURCE


def test_byte_reproducibility(tmp_path, capsys):
    subset = tmp_path / "nat.json"
    subset.write_text('{"kind": "interval", "lo": 0}')
    argv = ["check", "coseparable", "--group", "z", "--subset", str(subset), "--r", "1", "--R", "8"]
    code1, out1 = run(capsys, *argv)
    code2, out2 = run(capsys, *argv)
    assert (code1, out1) == (code2, out2)


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out = run(capsys, "gallery", "pv", "--out", str(target))
    assert code == 0
    assert json.loads(target.read_text()) == json.loads(out)


def test_module_inner(tmp_path, capsys):
    subset = tmp_path / "half.json"
    subset.write_text('{"kind": "halfspace", "side": "G"}')
    code, out = run(
        capsys,
        "module", "inner",
        "--group", "z4*z6", "--subset", str(subset),
        "--lhs", "G:1", "--rhs", "G:1",
    )
    assert code == 0
    doc = json.loads(out)
    value = doc["suites"][0]["checks"][0]["details"]["value"]
    assert value == {"e": [1, 1]}


def test_universal_demo(capsys):
    code, out = run(capsys, "universal", "demo")
    assert code == 0
    doc = json.loads(out)
    assert doc["suites"][0]["name"] == "universal-contrast-demo"
    assert doc["suites"][0]["verdict"] == "verified-at-scale"


def test_empty_report_shape():
    from translation_lab.reports import dumps

    assert dumps({"suites": []}) == '{"suites":[]}'


def test_reports_independent_of_hash_seed():
    import os
    import subprocess
    import sys

    outputs = []
    for seed in ("0", "7"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run(
            [sys.executable, "-m", "translation_lab.cli", "gallery", "pv"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1]
