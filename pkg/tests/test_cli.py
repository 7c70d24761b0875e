import csv
import io
import json
import subprocess
import sys

import pytest

from natanzon.cli import EXAMPLES, build_parser, run

PT2 = ["--preset", "pt2", "--A", "4.5", "--B", "1.5", "--alpha", "1"]
RM = ["--preset", "rm", "--A", "3", "--B", "2", "--alpha", "1"]


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_csv(capsys):
    code, out, _ = call(capsys, "spectrum", *PT2)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:2] == ["nu", "E"]
    assert [int(r[0]) for r in rows[1:]] == [0, 1]
    assert float(rows[2][1]) == pytest.approx(8.0, abs=1e-10)


def test_spectrum_json(capsys):
    code, out, _ = call(capsys, "spectrum", *RM, "--format", "json")
    levels = json.loads(out)
    assert code == 0 and len(levels) == 2
    assert levels[1]["E"] == pytest.approx(40 / 9, abs=1e-10)


def test_inline_params(capsys):
    code, out, _ = call(capsys, "spectrum", "--a", "1", "--c0", "1", "--c1", "1",
                        "--f", "80", "--h0", "10", "--h1", "20")
    assert code == 0 and len(out.strip().splitlines()) == 4


def test_params_file(capsys, tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"a": 0, "c0": 0, "c1": 1, "f": 24, "h0": 0, "h1": 8}))
    code, out, _ = call(capsys, "spectrum", "--params", str(f), "--format", "json")
    assert code == 0
    assert [lv["E"] for lv in json.loads(out)] == pytest.approx([0.0, 8.0], abs=1e-10)


def test_satellite_json(capsys):
    code, out, _ = call(capsys, "satellite", *PT2, "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["closure"] == "isospectral"
    step = data["steps"][0]
    assert step["pt2"]["A"] == pytest.approx(5.5) and step["pt2"]["B"] == pytest.approx(0.5)
    assert step["pt2"]["shift"] == pytest.approx(-16.0)


def test_satellite_chain_and_curves(capsys, tmp_path):
    curves = tmp_path / "c.csv"
    code, out, _ = call(capsys, "satellite", "--preset", "pt2", "--A", "10.5", "--B", "2.5", "--alpha", "1",
                        "--closure", "ground-zero", "--steps", "10", "--curves", str(curves))
    data = json.loads(out)
    assert code == 0 and len(data["steps"]) == 2 and "not normalizable" in data["reason"]
    head = curves.read_text().splitlines()[0]
    assert head == "r,V,V_sat1,V_sat2"


def test_satellite_lowest_weight_chain(capsys):
    code, out, _ = call(capsys, "satellite", *PT2, "--direction", "down")
    assert code == 0 and json.loads(out)["reason"] == "lowest weight"


def test_satellite_bad_closure(capsys):
    code, _, err = call(capsys, "satellite", *PT2, "--closure", "nonsense")
    assert code == 2 and "error" in err


def test_compare_susy(capsys):
    code, out, _ = call(capsys, "compare-susy", *RM, "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "distinct"
    code, out, _ = call(capsys, "compare-susy", *RM)
    assert out.splitlines()[0] == "r,V_satellite,V_partner,diff"


def test_verify_rm(capsys):
    code, out, _ = call(capsys, "verify", *RM)
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") >= 5


def test_wavefunction_and_zmap(capsys, tmp_path):
    dump = tmp_path / "map.csv"
    code, out, _ = call(capsys, "wavefunction", *PT2, "--nu", "1", "--n-points", "300", "--dump-zmap", str(dump))
    assert code == 0 and out.splitlines()[0] == "r,phi,dphi"
    assert len(out.splitlines()) == 301
    assert dump.read_text().splitlines()[0] == "r,z,zp"
    code, out, _ = call(capsys, "zmap", *RM, "--format", "json")
    assert code == 0 and json.loads(out)["closed_form"] is not None


def test_missing_level_is_numerical_failure(capsys):
    code, _, err = call(capsys, "wavefunction", *PT2, "--nu", "5")
    assert code == 1 and "numerical" in err


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "s.csv"
    code, out, _ = call(capsys, "spectrum", *PT2, "-o", str(dest))
    assert code == 0 and out == "" and dest.read_text().startswith("nu,E")


@pytest.mark.parametrize("argv", [
    ["spectrum"],
    ["spectrum", *PT2, "--a", "1"],
    ["spectrum", "--preset", "pt2", "--A", "4.5"],
    ["spectrum", "--a", "1", "--c0", "1"],
    ["spectrum", *PT2, "--bogus"],
    ["spectrum", "--a", "0", "--c0", "0", "--c1", "0", "--f", "1", "--h0", "1", "--h1", "1"],
    ["wavefunction", *PT2, "--n-points", "10"],
    ["satellite", *PT2, "--steps", "-1"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert run(argv) == 2


def test_params_file_unreadable(capsys, tmp_path):
    assert run(["spectrum", "--params", str(tmp_path / "missing.json")]) == 2


def test_grid_env(capsys, monkeypatch):
    monkeypatch.setenv("NATANZON_GRID_N", "250")
    code, out, _ = call(capsys, "zmap", *PT2)
    assert code == 0 and len(out.splitlines()) == 251
    monkeypatch.setenv("NATANZON_GRID_N", "many")
    assert run(["zmap", *PT2]) == 2


def test_repeat_runs_identical(capsys):
    outs = [call(capsys, "satellite", *RM, "--steps", "2")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [call(capsys, "wavefunction", *RM, "--nu", "1")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_help_has_examples():
    parser = build_parser()
    sub = next(a for a in parser._actions if a.choices and "spectrum" in a.choices)
    for name, sp in sub.choices.items():
        assert EXAMPLES[name].split("\n")[0] in sp.format_help()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "natanzon", "spectrum", *PT2],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("nu,E")
