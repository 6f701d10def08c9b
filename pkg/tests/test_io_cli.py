import glob
import json
import os

import pytest
from hypothesis import given, settings

from whakit import io as wio
from whakit.cli import main
from whakit.constructors import kZ, cyclic_r_matrix
from whakit.core import verify_axioms
from whakit.twisting import trivial_twist, gauge_twist

from strategies import groupoid_wha

FIXTURES = sorted(glob.glob(os.path.join(os.path.dirname(__file__), "fixtures", "*.wha.json")))


def _resave(path):
    L = wio.load(path)
    prov = L.doc.get("provenance") or {}
    return wio.dumps(wio.to_doc(L.H, L.qt, L.twist, prov.get("recipe"), prov.get("parent")))


def test_fixtures_exist():
    assert len(FIXTURES) >= 10


@pytest.mark.parametrize("path", FIXTURES, ids=[os.path.basename(p) for p in FIXTURES])
def test_fixture_round_trip_is_byte_identical(path):
    with open(path) as fh:
        text = fh.read()
    assert _resave(path) == text


@settings(max_examples=15)
@given(groupoid_wha())
def test_round_trip_random_groupoids(data):
    _, H = data
    text = wio.dumps(wio.to_doc(H))
    L = wio.loads(text)
    assert L.verified
    for attr in ("mult", "unit", "comult", "counit", "antipode"):
        assert getattr(L.H, attr) == getattr(H, attr)
    assert wio.dumps(wio.to_doc(L.H)) == text


def test_round_trip_r_matrix_over_cyclotomic_field():
    H, qt = cyclic_r_matrix(3)
    text = wio.dumps(wio.to_doc(H, qt.with_bar(H)))
    L = wio.loads(text)
    assert L.H.order == 3 and L.qt.R == qt.R


def test_hash_ignores_provenance():
    H = kZ(2)
    a = wio.to_doc(H, recipe={"x": 1})
    b = wio.to_doc(H, recipe={"x": 2}, parent="abc")
    assert wio.content_hash(a) == wio.content_hash(b)
    assert wio.content_hash(a) != wio.content_hash(wio.to_doc(kZ(3)))


def test_truncated_file_names_section():
    with open(FIXTURES[0]) as fh:
        text = fh.read()
    cut = text[: text.index('"mult"') + 40]
    with pytest.raises(wio.ParseError) as exc:
        wio.loads(cut)
    msg = str(exc.value)
    # sections are written in sorted order, so name and unit come after mult
    assert "'mult'" in msg and "name" in msg and "unit" in msg


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d.pop("counit"), "counit"),
    (lambda d: d.update(format_version=7), "format_version"),
    (lambda d: d["mult"].append([99, 0, 0, "1"]), "mult"),
    (lambda d: d["unit"].append([0, "1/0"]), "unit"),
    (lambda d: d.update(basis_labels=["a"]), "basis_labels"),
])
def test_malformed_documents(mutate, needle):
    doc = wio.to_doc(kZ(2))
    mutate(doc)
    with pytest.raises(wio.ParseError, match=needle):
        wio.loads(json.dumps(doc))


def test_axiom_failure_and_skip_verify():
    doc = wio.to_doc(kZ(2))
    doc["antipode"] = [[0, 0, "1"], [1, 1, "2"]]
    text = json.dumps(doc)
    with pytest.raises(wio.VerificationError) as exc:
        wio.loads(text)
    assert not exc.value.report.passed
    L = wio.loads(text, skip_verify=True)
    assert "axioms not verified" in L.warnings and not L.verified


# -- command line

def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def fixture(name):
    return os.path.join(os.path.dirname(__file__), "fixtures", name + ".wha.json")


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", fixture("DkZ2"))
    assert code == 0 and "verdict: pass" in out
    code, out, _ = run(capsys, "verify", "--json", fixture("kG2"))
    assert code == 0 and json.loads(out)["passed"]


def test_cli_verify_failure(tmp_path, capsys):
    doc = wio.to_doc(kZ(2))
    doc["antipode"] = [[0, 0, "1"], [1, 1, "2"]]
    p = tmp_path / "bad.wha.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", str(p))
    assert code == 1 and "FAIL" in out
    code, out, _ = run(capsys, "analyze", "--json", str(p))
    assert code == 1 and json.loads(out)["kind"] == "VerificationError"


def test_cli_exit_codes(tmp_path, capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.wha.json"))[0] == 1
    assert run(capsys, "make", "elementary", "--q", "2", "--n", "3", "-o", str(tmp_path / "x"))[0] == 2


def test_cli_analyze(capsys):
    code, out, _ = run(capsys, "analyze", fixture("kG2"))
    assert code == 0 and "Haar integral: 1/2 1/2 1/2 1/2" in out
    code, out, _ = run(capsys, "analyze", fixture("sweedler"))
    assert "semisimple: false" in out and "Haar integral: none" in out


def test_cli_double_is_deterministic_with_provenance(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "double", fixture("kG2"), "-o", str(a))[0] == 0
    assert run(capsys, "double", fixture("kG2"), "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    parent = wio.content_hash(wio.load(fixture("kG2")).doc)
    assert json.loads(a.read_text())["provenance"]["parent"] == parent
    code, out, _ = run(capsys, "verify", str(a))
    assert code == 0


def test_cli_twist(tmp_path, capsys):
    H, qt = cyclic_r_matrix(3)
    x = H.unit.scale(2) - H.e(1)
    t, _ = gauge_twist(H, trivial_twist(H), x)
    tw = tmp_path / "tw.json"
    tw.write_text(json.dumps({"field_order": 3, "twist": wio.twist_doc(t)}))
    out = tmp_path / "t.wha.json"
    assert run(capsys, "twist", fixture("kZ3_R"), str(tw), "-o", str(out))[0] == 0
    code, text, _ = run(capsys, "verify", str(out))
    assert code == 0 and "[r_matrix]" in text


def test_cli_modular_and_graph(capsys):
    code, out, _ = run(capsys, "modular", fixture("DkZ2"))
    assert code == 0 and "modular: true" in out
    code, out, _ = run(capsys, "modular", fixture("kZ2"))
    assert code == 1
    code, out, _ = run(capsys, "graph", "--dot", fixture("kZ2"))
    assert code == 0 and out.startswith("graph")
    code, out, _ = run(capsys, "graph", "--json", fixture("kZ3"))
    assert code == 0 and "matrix" in json.loads(out)


def test_cli_make(tmp_path, capsys):
    p = tmp_path / "g.wha.json"
    assert run(capsys, "make", "groupoid", "--objects", "2", "--full", "--dual", "-o", str(p))[0] == 0
    assert verify_axioms(wio.load(str(p)).H).passed
    p = tmp_path / "e.wha.json"
    assert run(capsys, "make", "elementary", "--q", "2", "-o", str(p))[0] == 0
    assert wio.load(str(p)).H.dim == 16
    assert run(capsys, "make", "groupoid", "-o", str(p))[0] == 2
