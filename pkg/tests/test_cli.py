import io
import json
import subprocess
import sys

import pytest

from qcr.cli import main


def run(argv, stdin="", capsys=None, monkeypatch=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def cli(capsys, monkeypatch):
    return lambda argv, stdin="": run(argv, stdin, capsys, monkeypatch)


def test_model_then_splitting(cli):
    code, out = cli(["model", "--factor", "CoV:2"])
    assert code == 0
    code, out2 = cli(["splitting"], out)
    assert code == 0 and json.loads(out2) == {"cocr": True, "plus": [4]}


def test_dual_then_check(cli):
    _, m = cli(["model", "--factor", "CoVp:1"])
    _, d = cli(["dual"], m)
    code, out = cli(["check"], d)
    assert code == 0
    assert json.loads(out) == {"cr": True, "cocr": False, "minus": [-3, -3], "plus": []}
    _, out = cli(["check", "--kind", "cr"], d)
    assert json.loads(out) == {"cr": True}


def test_classify_disguised(cli):
    _, m = cli(["model", "--factor", "CoV:1", "--factor", "CoVp:1", "--disguise", "--seed", "5"])
    code, out = cli(["classify"], m)
    assert code == 0
    assert json.loads(out) == [{"k": 1, "tag": "CoV"}, {"k": 1, "tag": "CoVp"}]


def test_output_is_byte_stable(cli):
    a = cli(["model", "--factor", "CrV:2", "--disguise", "--seed", "3"])[1]
    b = cli(["model", "--factor", "CrV:2", "--disguise", "--seed", "3"])[1]
    assert a == b


def test_parse_error_exit_code(cli):
    code, out = cli(["check"], "{not json")
    assert code == 2 and json.loads(out)["error"] == "ParseError"
    code, _ = cli(["check"], json.dumps({"structure": 1}))
    assert code == 2
    code, _ = cli(["model", "--factor", "Bad:1"])
    assert code == 2


def test_domain_error_exit_code(cli):
    doc = {
        "structure": json.loads(cli(["model", "--factor", "CoV:1"])[1])["structure"],
        "subspace": [["1", "0", "0", "0"], ["0", "1", "0", "0"]],
    }
    code, out = cli(["splitting"], json.dumps(doc))
    err = json.loads(out)
    assert code == 1 and err["error"] == "TorsionDetected" and err["module"] == "twistor-pencil"
    code, out = cli(["classify"], json.dumps(doc))
    assert code == 1 and json.loads(out)["module"] == "models-classification"
    bad = dict(doc, structure=dict(doc["structure"], J=doc["structure"]["I"]))
    code, out = cli(["check"], json.dumps(bad))
    assert code == 1 and json.loads(out)["module"] == "quaternion-structures"


def test_max_dim_guard(cli):
    code, out = cli(["model", "--factor", "CoV:5", "--max-dim", "4"])
    assert code == 1 and json.loads(out)["error"] == "DimensionGuard"


def test_ftriple_verbs(cli):
    code, out = cli(["ftriple", "--l", "1", "--m", "1"])
    doc = json.loads(out)
    assert code == 0 and doc["valid"] and doc["cocr_side"]["plus"] == [1, 1, 2]
    code, out = cli(["ftriple", "--frame", "1,0,0;0,1,0;0,0,1"])
    assert code == 0 and json.loads(out)["cocr_side"]["plus"] == [2]
    code, out = cli(["ftriple", "--frame", "1,0,0;0,2,0;0,0,1"])
    assert code == 1 and json.loads(out)["module"] == "f-structures"


def test_conjugation_recover(cli):
    code, out = cli(["conjugation-recover", "--n", "2", "--disguise", "--seed", "1"])
    doc = json.loads(out)
    assert code == 0 and len(doc["u"]) == 2 and len(doc["axes"]) == 2


def test_random_and_selftest(cli):
    code, out = cli(["random", "--count", "3", "--max-dim", "6", "--json"])
    doc = json.loads(out)
    assert code == 0 and doc["recovered"] == doc["total"] == 3
    code, out = cli(["selftest"])
    assert code == 0 and "0 failed" in out
    code, out = cli(["selftest", "--json", "--mutate", "model-degree"])
    assert code == 1 and json.loads(out)["failed"] >= 1


def test_console_script_pipes():
    model = subprocess.run([sys.executable, "-m", "qcr.cli", "model", "--factor", "CoV:1"], capture_output=True, text=True)
    split = subprocess.run([sys.executable, "-m", "qcr.cli", "splitting"], input=model.stdout, capture_output=True, text=True)
    assert split.returncode == 0 and json.loads(split.stdout) == {"cocr": True, "plus": [2]}
