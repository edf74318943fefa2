import json
import os
import subprocess
import sys

import pytest

jsonschema = pytest.importorskip("jsonschema")

from malle import cli

SCHEMA_DIR = os.path.join(os.path.dirname(cli.__file__), "schemas")


def schema(name):
    with open(os.path.join(SCHEMA_DIR, name)) as fh:
        return json.load(fh)


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, out


def test_invariants_kluners_split(capsys):
    code, out = run_cli(["invariants", "--group", "kluners",
                         "--action", "kluners-split"], capsys)
    assert code == 0
    record = json.loads(out)
    jsonschema.validate(record, schema("invariants.schema.json"))
    assert record["a"] == 2 and record["b"] == 2
    assert record["B"] == 2
    assert record["b_malle"] == 1


def test_invariants_c2(capsys):
    code, out = run_cli(["invariants", "--group", "C2"], capsys)
    record = json.loads(out)
    assert (record["a"], record["b"]) == (1, 1)


def test_invariants_v4(capsys):
    code, out = run_cli(["invariants", "--group", "V4",
                         "--action", "trivial-pi-over-Q"], capsys)
    record = json.loads(out)
    assert (record["a"], record["b"]) == (2, 3)


def test_invariants_resolution_failure(capsys):
    code, _ = run_cli(["invariants", "--group", "nonexistent"], capsys)
    assert code == 2
    code, _ = run_cli(["invariants", "--group", "kluners",
                       "--action", "bogus-preset"], capsys)
    assert code == 2


def test_invariants_validation_failure(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"degree": 3, "generators": [[1, 1, 2]]}))
    code, _ = run_cli(["invariants", "--group", str(bad)], capsys)
    assert code == 3


def test_local_factor(capsys):
    code, out = run_cli(["local-factor", "--group", "kluners",
                         "--conjugator", "(1 4)(2 5)(3 6)", "--unit", "2"],
                        capsys)
    assert code == 0
    record = json.loads(out)
    jsonschema.validate(record, schema("local_factor.schema.json"))
    assert record["coefficients"] == {"0": "1", "4": "2"}


def test_euler(capsys):
    code, out = run_cli(["euler", "--group", "C2", "--s", "2.0",
                         "--prime-bound", "10000"], capsys)
    assert code == 0
    record = json.loads(out)
    jsonschema.validate(record, schema("euler.schema.json"))
    assert record["a"] == 1 and record["b"] == "1"
    assert abs(record["G_estimate"] - 90 / 3.14159265358979 ** 4) < 1e-4


def test_count(tmp_path, capsys):
    out_file = tmp_path / "counts.json"
    svg_file = tmp_path / "plot.svg"
    code, _ = run_cli(["count", "--group", "C2", "--ordering", "disc",
                       "--X", "1e5", "--json", str(out_file),
                       "--svg", str(svg_file)], capsys)
    assert code == 0
    record = json.loads(out_file.read_text())
    jsonschema.validate(record, schema("count.schema.json"))
    assert record["predicted"] == {"a": 1, "b": 1}
    assert record["counts"][-1] > 0
    assert svg_file.read_text().startswith("<svg")


def test_count_catalog_group_resolution(capsys):
    code, out = run_cli(["count", "--group", "V4", "--ordering", "ram",
                         "--X", "100"], capsys)
    assert code == 0
    record = json.loads(out)
    # ram prediction for V4: one orbit per involution
    assert record["predicted"] == {"a": 1, "b": 3}


def test_mobius(capsys):
    code, out = run_cli(["mobius", "--order", "12", "--check"], capsys)
    assert code == 0
    record = json.loads(out)
    assert record["mismatches"] == 0


def test_wiles_eval(tmp_path, capsys):
    data = tmp_path / "locals.json"
    data.write_text(json.dumps({
        "locals": [{"L_size": 9, "H0_size": 3}, {"L_size": 3, "H0_size": 3}],
        "global_H0_T": 9, "global_H0_Tstar": 3}))
    code, out = run_cli(["wiles-eval", "--file", str(data)], capsys)
    assert code == 0
    record = json.loads(out)
    jsonschema.validate(record, schema("wiles.schema.json"))
    assert record["ratio"] == "9/1"


def test_wiles_eval_missing_file(capsys):
    code, _ = run_cli(["wiles-eval", "--file", "/nonexistent.json"], capsys)
    assert code == 2


def test_verify_suites(capsys):
    code, out = run_cli(["verify", "mobius"], capsys)
    assert code == 0
    assert "PASS" in out
    code, out = run_cli(["verify", "burnside", "--filter", "kluners"], capsys)
    assert code == 0


def test_verify_vacuous_filter_warns(capsys):
    code, out = run_cli(["verify", "sieve", "--filter", "no-such-group"], capsys)
    assert code == 0
    assert "vacuous" in out


def test_deterministic_output(capsys):
    _, out1 = run_cli(["invariants", "--group", "kluners",
                       "--action", "kluners-nonsplit"], capsys)
    _, out2 = run_cli(["invariants", "--group", "kluners",
                       "--action", "kluners-nonsplit"], capsys)
    assert out1 == out2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "malle.cli", "invariants", "--group", "C3"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    record = json.loads(proc.stdout)
    assert record["a"] == 2


def test_config_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "malle.conf"
    cfg.write_text("prime_bound = 5000\n# comment\n")
    conf = cli.load_config(str(cfg))
    assert conf["prime_bound"] == "5000"
    monkeypatch.setenv("MALLE_PRIME_BOUND", "7000")
    conf = cli.load_config(str(cfg))
    assert conf["prime_bound"] == "7000"
