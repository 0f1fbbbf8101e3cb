import json
import subprocess
import sys

import pytest

from glagrange.cli import run

C2_TORUS = {"schema_version": 1, "group": {"family": "cyclic", "order": 2}, "cover": {"genus": 1, "monodromy": ["x", "e"]}}
C2_GENUS2 = {"group": "C2", "cover": {"genus": 2, "monodromy": ["x", "e", "e", "e"]}}

ROTATION_TOML = """\
group = "C4"
[module]
omega = [[0, 1], [-1, 0]]
generators = [[[0, -1], [1, 0]]]
[config]
height_bound = 10
"""


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def invoke(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


def test_cover_command(tmp_path, capsys):
    code, rep = invoke(capsys, ["cover", "--input", write(tmp_path, "c.json", C2_TORUS)])
    assert code == 0
    cover = rep["outputs"]["cover"]
    assert cover["cells"] == {"vertices": 2, "edges": 6, "triangles": 4}
    assert cover["module_dim"] == 2
    assert rep["seed"] == 0 and rep["schema_version"] == 1
    assert rep["legend"]["elements"] == {"0": "e", "1": "x"}


def test_find_lagrangian_command(tmp_path, capsys):
    code, rep = invoke(capsys, ["find-lagrangian", "--input", write(tmp_path, "c.json", C2_TORUS)])
    assert code == 0
    cert = rep["outputs"]["certificate"]
    assert cert["dimension"] == 1
    # every rational is a "p/q" string
    assert all(isinstance(x, str) and "/" in x for row in cert["lagrangian"] for x in row)


def test_round_trip_and_tamper(tmp_path, capsys):
    spec = write(tmp_path, "c.json", C2_GENUS2)
    out = str(tmp_path / "report.json")
    assert run(["find-lagrangian", "--input", spec, "--output", out]) == 0
    code, rep = invoke(capsys, ["verify", "--input", spec, "--certificate", out])
    assert code == 0 and rep["verdicts"]["certificate_verified"]
    # the echoed input reproduces the run
    report = json.loads(open(out).read())
    code, again = invoke(capsys, ["find-lagrangian", "--input", write(tmp_path, "echo.json", report["input"])])
    assert strip_timing(again) == strip_timing(report)

    cert = report["outputs"]["certificate"]
    cert["lagrangian"][0][5] = "7/1" if cert["lagrangian"][0][5] != "7/1" else "8/1"
    bad = write(tmp_path, "bad.json", {"certificate": cert})
    code, rep = invoke(capsys, ["verify", "--input", spec, "--certificate", bad])
    assert code == 1
    failure = rep["outputs"]["certificate"]["failure"]
    assert failure["property"] in ("isotropic", "invariant", "dimension")
    assert len(failure["witness"]) == 2


def test_determinism(tmp_path, capsys):
    spec = write(tmp_path, "s.json", {"group": "Q8", "cover": {"genus": 2, "random_seed": 11}})
    _, a = invoke(capsys, ["find-lagrangian", "--input", spec, "--seed", "5"])
    _, b = invoke(capsys, ["find-lagrangian", "--input", spec, "--seed", "5"])
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)
    assert a["seed"] == 5 and a["config"]["seed"] == 5


def test_toml_rotation_module_exhausts(tmp_path, capsys):
    code, rep = invoke(capsys, ["find-lagrangian", "--input", write(tmp_path, "rot.toml", ROTATION_TOML)])
    assert code == 1
    assert rep["verdicts"] == {"lagrangian_found": False}
    assert rep["outputs"]["exhausted"]["height_bound"] == 10


def test_witt_command_with_induction(tmp_path, capsys):
    doc = {
        "group": "C4",
        "left": {"cover": {"genus": 2, "monodromy": ["x^2", "e", "e", "e"]}, "connected": False},
        "right": {"induce": {"subgroup": ["x^2"], "cover": {"genus": 2, "monodromy": ["x^2", "e", "e", "e"]}}},
    }
    code, rep = invoke(capsys, ["witt-equiv", "--input", write(tmp_path, "w.json", doc)])
    assert code == 0 and rep["outputs"]["equivalent"] is True
    assert rep["outputs"]["left_dim"] == rep["outputs"]["right_dim"] == 12


def test_chevalley_weil_command(tmp_path, capsys):
    code, rep = invoke(capsys, ["chevalley-weil", "--input", write(tmp_path, "d.json", {"group": "D8", "cover": {"genus": 2, "monodromy": ["x", "y", "y", "x"]}})])
    assert code == 0
    assert rep["outputs"]["traces"][0] == "18/1"
    assert sum(b["block_dim"] for b in rep["outputs"]["blocks"]) == 18


def test_strategy_flag(tmp_path, capsys):
    spec = write(tmp_path, "d.json", {"group": "D8", "cover": {"genus": 2, "monodromy": ["x", "y", "y", "x"]}})
    code, rep = invoke(capsys, ["find-lagrangian", "--input", spec, "--strategies", "field_symplectic"])
    assert code == 1
    code, rep = invoke(capsys, ["find-lagrangian", "--input", spec, "--strategies", "enumerate", "--height-bound", "2"])
    assert code == 0 and "enumerate" in rep["outputs"]["certificate"]["provenance"]


@pytest.mark.parametrize(
    "doc,needle",
    [
        ('{"group": "C2", "cover": {"genus": 1, "monodromy": ["x", "e"]', "line 1"),
        ({"group": "D8", "cover": {"genus": 1, "monodromy": ["x", "e"]}}, "subgroup"),
        ({"group": "D8", "cover": {"genus": 1, "monodromy": ["x", "y"]}}, "relation"),
        ({"group": "C2", "cover": {"genus": 1, "monodromy": ["x"]}}, "monodromy"),
        ({"group": "C2", "cover": {"genus": 1, "monodromy": ["z", "e"]}}, "monodromy[0]"),
        ({"group": "nonsense", "cover": {"genus": 1, "monodromy": ["x", "e"]}}, "group"),
        ({"schema_version": 9, "group": "C2"}, "schema_version"),
        ({"group": "C2", "cover": {"genus": 1, "monodromy": ["x", "e"]}, "config": {"height_bound": 0}}, "config"),
    ],
)
def test_input_errors_exit_2(tmp_path, capsys, doc, needle):
    code = run(["find-lagrangian", "--input", write(tmp_path, "bad.json", doc)])
    err = capsys.readouterr().err
    assert code == 2
    assert needle in err


def test_verify_needs_certificate(tmp_path, capsys):
    assert run(["verify", "--input", write(tmp_path, "c.json", C2_TORUS)]) == 2


def test_corpus_serial_and_parallel_agree(tmp_path):
    # the console script and a parallel run give the same table
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    r1 = subprocess.run([sys.executable, "-m", "glagrange", "corpus", "--output", str(out1)], capture_output=True)
    r2 = subprocess.run([sys.executable, "-m", "glagrange", "corpus", "--workers", "2", "--output", str(out2)], capture_output=True)
    assert r1.returncode == 0 == r2.returncode, r1.stderr
    a, b = json.loads(out1.read_text()), json.loads(out2.read_text())
    assert len(a["outputs"]["cases"]) >= 20
    strip = lambda rep: [{k: v for k, v in row.items() if k != "seconds"} for row in rep["outputs"]["cases"]]
    assert strip(a) == strip(b)
