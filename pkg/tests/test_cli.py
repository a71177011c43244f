import json
import subprocess
import sys

import pytest

from lacunary.cli import main
from lacunary.report import emit, parse

FIXTURE_A = {"curve": {"p1": ["0", "0", "0", "1"], "p2": [0, 0, 1]},
             "diagram": {"degrees": [1], "selections": [[1, 2]]},
             "options": {"seed": 7, "samples": 200}}


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="cfg.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)
    return _write


def test_bound_fixture_a(write, tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["bound", "--config", write(FIXTURE_A), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "distinct_mult" in text and "Z refined" in text
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1 and doc["bound"]["b"] == 3 and doc["bound"]["sigma"] == 2
    assert doc["bound"]["z_bound_refined"]["value"].startswith("19.16")
    assert doc["bound"]["z_bound"]["rounding"] == "up" and doc["bound"]["rho_lb"]["rounding"] == "down"


def test_condition_violation_exit_2(write, capsys):
    cfg = {"curve": {"p1": [0, 1, 1], "p2": [0, 1, 2]},
           "diagram": {"degrees": [1, 2], "selections": [[1], [1]]},
           "options": {"condition": "l1"}}
    assert main(["bound", "--config", write(cfg)]) == 2
    assert "witness 0 1" in capsys.readouterr().out


def test_malformed_rational_exit_1(write, capsys):
    cfg = dict(FIXTURE_A, curve={"p1": ["1/0", "1"], "p2": [0, 1]})
    assert main(["bound", "--config", write(cfg)]) == 1
    assert "curve.p1[0]" in capsys.readouterr().err


@pytest.mark.parametrize("text,needle", [
    ("{not json", ":1:2:"),
    (json.dumps(dict(FIXTURE_A, curve={"p1": [0.5, 1], "p2": [0, 1]})), "floats"),
    (json.dumps(dict(FIXTURE_A, diagram={"degrees": [1]})), "diagram"),
    (json.dumps(dict(FIXTURE_A, schema_version=9)), "schema_version"),
])
def test_located_config_errors(write, capsys, text, needle):
    assert main(["bound", "--config", write(text)]) == 1
    assert needle in capsys.readouterr().err


def test_missing_file_exit_1(tmp_path):
    assert main(["bound", "--config", str(tmp_path / "nope.json")]) == 1


def test_verify_deterministic_and_round_trip(write, tmp_path, capsys):
    cfg = write(FIXTURE_A)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--config", cfg, "--out", str(a)]) == 0
    assert main(["verify", "--config", cfg, "--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert emit(parse(text)) == text
    assert "PASS" in capsys.readouterr().out


def test_verify_zero_samples(write, tmp_path):
    out = tmp_path / "z.json"
    assert main(["verify", "--config", write(FIXTURE_A), "--samples", "0", "--out", str(out)]) == 0
    run = json.loads(out.read_text())["verification"]
    assert run["samples"] == 0 and run["passed"]


def test_triangulate(write, tmp_path, capsys):
    out = tmp_path / "t.json"
    cfg = {"curve": {"p1": [0, 1, 1], "p2": [0, 1, -1]},
           "diagram": {"geometric": {"D": 2, "tau": 2, "depth": 2}}}
    assert main(["triangulate", "--config", write(cfg), "--out", str(out)]) == 0
    blocks = json.loads(out.read_text())["extra"]["blocks"]
    assert [b["degree"] for b in blocks] == [0, 1, 3]
    for blk in blocks:
        tau = len(blk["columns"])
        upper = blk["triangulated"][:tau]
        assert all(upper[i][j] == "0" for i in range(tau) for j in range(i + 1, tau))
    assert "degree 1" in capsys.readouterr().out


def test_check_lemmas_small_and_fault(capsys):
    small = ["check-lemmas", "--max-point", "4", "--max-degree", "3", "--max-total", "3",
             "--max-r", "3", "--max-n", "5"]
    assert main(small) == 0
    assert main(small + ["--inject-fault"]) == 1
    assert "FAILED" in capsys.readouterr().out


def test_console_entry_point(write):
    proc = subprocess.run([sys.executable, "-m", "lacunary.cli", "bound", "--config", write(FIXTURE_A)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "Z integer" in proc.stdout
