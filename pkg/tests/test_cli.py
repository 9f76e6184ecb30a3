import json
import subprocess
import sys

import pytest

from toricb import b_terminalize, classify
from toricb.cli import fan_from_document, fan_to_document, main, rule_from_document

A3 = {"rank": 3, "rays": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "max_cones": [[0, 1, 2]]}
C5 = {"rank": 3, "rays": [[1, 0, 0], [-1, 5, 0], [0, 0, 1]], "max_cones": [[0, 1, 2]]}
HALF = {"rank": 2, "rays": [[1, 0], [1, 2]], "max_cones": [[0, 1]]}
A2 = {"rank": 2, "rays": [[1, 0], [0, 1]], "max_cones": [[0, 1]]}
ZERO = {"type": "zero"}
C120 = {"type": "brauer_c3", "p": 3, "c": [1, 2, 0]}
C110 = {"type": "brauer_c3", "p": 3, "c": [1, 1, 0]}


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), (json.loads(err) if err.strip() else None)


def test_classify(capsys, write):
    code, doc, _ = run(capsys, "classify", write("a3.json", A3), write("r.json", C120))
    assert code == 0 and doc["format_version"] == 1
    assert doc["b_class"] == "b-canonical" and doc["witness"]["b"] == "0"
    code, doc, _ = run(capsys, "classify", write("a3.json", A3), write("z.json", ZERO))
    assert (doc["b_class"], doc["ordinary_class"]) == ("b-terminal", "terminal")
    code, doc, _ = run(capsys, "classify", write("c5.json", C5), write("z.json", ZERO))
    assert doc["ordinary_class"] == "log-terminal" and doc["min_discrepancy"] == "-3/5"


def test_discrepancy(capsys, write):
    code, doc, _ = run(capsys, "discrepancy", write("a3.json", A3), write("r.json", C110),
                       "--ray", "1,1,0")
    assert code == 0 and doc["b"] == "-1/3" and doc["r"] == "1"
    code, doc, _ = run(capsys, "discrepancy", write("a3.json", A3), write("z.json", ZERO),
                       "--ray", "1,1,1", "--decimal")
    assert doc["a"] == doc["b"] == "2" and doc["approximate_decimal"]["b"] == 2.0
    code, _, err = run(capsys, "discrepancy", write("a3.json", A3), write("z.json", ZERO),
                       "--ray", "1,0,0")
    assert code == 4 and err["error"] == "NotExceptional"
    code, _, _ = run(capsys, "discrepancy", write("a3.json", A3), write("z.json", ZERO),
                     "--ray=-1,1,0")
    assert code == 4


def test_enumerate(capsys, write):
    code, doc, _ = run(capsys, "enumerate", write("a3.json", A3), write("r.json", C110))
    assert [r["w"] for r in doc["records"]] == [[1, 1, 0]]
    code, doc, _ = run(capsys, "enumerate", write("a3.json", A3), write("z.json", ZERO))
    assert doc["records"] == []
    code, doc, _ = run(capsys, "enumerate", write("c5.json", C5), write("z.json", ZERO),
                       "--threshold", "0", "--jobs", "2")
    assert min(r["a"] for r in doc["records"]) == "-3/5"
    code, _, err = run(capsys, "enumerate", write("c5.json", C5), write("z.json", ZERO),
                       "--threshold", "-2")
    assert code == 2


def test_terminalize_round_trip(capsys, write, tmp_path):
    out = tmp_path / "out.json"
    code, doc, _ = run(capsys, "terminalize", write("a3.json", A3), write("r.json", C120),
                       "--out", str(out))
    assert code == 0 and doc["verified"] is True
    fan = fan_from_document(json.loads(out.read_text()))
    assert classify(fan, rule_from_document(C120)).b_class.label(b=True) == "b-terminal"
    code, doc, _ = run(capsys, "terminalize", write("a3.json", A3), write("z.json", ZERO))
    assert doc["output_fan"] == A3 and doc["extracted"] == []
    bad = {"rank": 3, "rays": [[2, 4, 6], [0, 1, 0], [0, 0, 1]], "max_cones": [[0, 1, 2]]}
    code, _, err = run(capsys, "terminalize", write("bad.json", bad), write("z.json", ZERO))
    assert code == 2 and err["violations"][0]["kind"] == "non-primitive ray"


def test_resolve_and_subdivide(capsys, write):
    code, doc, _ = run(capsys, "resolve", write("h.json", HALF))
    assert code == 0 and len(doc["rays"]) == 3
    code, doc, _ = run(capsys, "subdivide", write("a2.json", A2), "--ray", "1,1")
    assert sorted(doc["rays"]) == [[0, 1], [1, 0], [1, 1]]
    code, _, err = run(capsys, "subdivide", write("a2.json", A2), "--ray", "1,0")
    assert code == 4 and err["error"] == "RayAlreadyPresent"


def test_parse_errors(capsys, write, tmp_path):
    code, _, err = run(capsys, "classify", str(tmp_path / "missing.json"), write("z.json", ZERO))
    assert code == 2
    code, _, err = run(capsys, "classify", write("a3.json", A3),
                       write("f.json", {"type": "finite", "entries": [{"ray": [1, 1, 0], "coeff": 0.5}]}))
    assert code == 2 and "exact" in err["detail"]
    code, _, _ = run(capsys, "classify", write("a3.json", A3),
                     write("m.json", {"type": "brauer", "p": 3, "matrix": [[0, 1], [2, 0]]}))
    assert code == 2
    code, _, _ = run(capsys, "classify", write("a3.json", A3),
                     write("c.json", {"type": "brauer_c3", "p": 3, "c": [1, 0, 0]}))
    assert code == 2


def test_not_q_gorenstein_exit(capsys, write):
    fan = {"rank": 3, "rays": [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 2]], "max_cones": [[0, 1, 2, 3]]}
    code, _, err = run(capsys, "classify", write("q.json", fan), write("z.json", ZERO))
    assert code == 3 and len(err["cone"]) == 4


def test_composite_modulus_note(capsys, write):
    rule = {"type": "brauer", "p": 6, "matrix": [[0, 2], [4, 0]]}
    code, doc, _ = run(capsys, "classify", write("a2.json", A2), write("r.json", rule))
    assert code == 0 and any("composite" in n for n in doc["notes"])


def test_fan_document_round_trip():
    rep = b_terminalize(fan_from_document(C5), rule_from_document(ZERO))
    doc = fan_to_document(rep.output_fan)
    assert fan_from_document(json.loads(json.dumps(doc))) == rep.output_fan


def test_output_is_deterministic(write):
    args = [sys.executable, "-m", "toricb", "terminalize", write("c5.json", C5),
            write("r.json", {"type": "brauer", "p": 7, "matrix": [[0, 0, -5], [0, 0, -1], [5, 1, 0]]})]
    first = subprocess.run(args, capture_output=True, check=True).stdout
    second = subprocess.run(args + ["--jobs", "3"], capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["verified"] is True
