import json
from importlib import resources

import jsonschema
import pytest

from knotq.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, load_corpus, main

FIXTURE = str(resources.files("knotq").joinpath("data/trefoil.diagram"))
SCHEMA = json.loads(resources.files("knotq").joinpath("data/report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_trefoil(capsys):
    code, out, _ = run(capsys, "compute", "--strands", "2", "--braid", "1 1 1")
    assert code == EXIT_OK
    assert "minv: [-1]" in out


def test_compute_json_matches_the_schema(capsys):
    code, out, _ = run(capsys, "compute", "--strands", "3", "--braid", "1 -2 1 -2", "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["minv"] == [-1, 1]
    assert json.loads(json.dumps(doc)) == doc


def test_diagram_fixture_gives_the_braid_report(capsys):
    _, from_file, _ = run(capsys, "compute", "--diagram", FIXTURE, "--json")
    _, from_braid, _ = run(capsys, "compute", "--strands", "2", "--braid", "1 1 1", "--json")
    assert from_file == from_braid


def test_compute_unknot(capsys):
    code, out, _ = run(capsys, "compute", "--strands", "1", "--braid", "", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["minv"] == [0] and doc["verdict"] == "trivial"
    jsonschema.validate(doc, SCHEMA)


def test_debug_dump(capsys):
    code, out, _ = run(capsys, "compute", "--diagram", FIXTURE, "--debug")
    assert code == EXIT_OK
    assert "phi: " in out and "aux 0" in out


@pytest.mark.parametrize("argv", [
    ["compute", "--strands", "2", "--braid", "1 3"],
    ["compute", "--strands", "2", "--braid", "1 1"],          # a link
    ["compute", "--braid", "1 1 1"],                          # no strand count
    ["compute", "--strands", "2", "--braid", "1", "--diagram", FIXTURE],
    ["compute", "--diagram", "/nonexistent/file"],
    ["fuzz", "--strands", "2", "--braid", "1 x"],
    ["frobnicate"],
])
def test_input_errors_exit_2(capsys, argv):
    assert main(argv) == EXIT_INPUT


def test_shipped_corpus_passes(capsys):
    code, out, _ = run(capsys, "corpus")
    assert code == EXIT_OK
    assert out.strip().endswith("10 entries, 0 failed")


def test_corpus_is_deterministic(capsys):
    first = run(capsys, "corpus", "--json")[1]
    second = run(capsys, "corpus", "--json")[1]
    assert first == second


def test_corpus_mismatch_is_named(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([{"name": "wrong-trefoil",
                                 "braid": {"strands": 2, "letters": [1, 1, 1]},
                                 "expected": {"torsion": [3], "minv": [1]}}]))
    code, out, _ = run(capsys, "corpus", str(path))
    assert code == EXIT_MISMATCH
    assert "wrong-trefoil" in out and "FAIL" in out


def test_empty_corpus(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text("[]")
    code, out, _ = run(capsys, "corpus", str(path))
    assert code == EXIT_OK
    assert out.strip() == "0 entries, 0 failed"


def test_sourcing_error_aborts(tmp_path, capsys):
    path = tmp_path / "typo.json"
    path.write_text(json.dumps([{"name": "not-7_4",
                                 "braid": {"strands": 2, "letters": [1, 1, 1]},
                                 "expected": {"torsion": [15], "minv": [-2]}}]))
    code, _, err = run(capsys, "corpus", str(path))
    assert code == EXIT_INPUT
    assert "determinant 3" in err


def test_corpus_accepts_diagram_entries(tmp_path, capsys, trefoil_spec):
    path = tmp_path / "fixture.json"
    path.write_text(json.dumps([{"name": "fixture", "diagram": trefoil_spec,
                                 "expected": {"torsion": [3], "minv": [-1]}}]))
    assert run(capsys, "corpus", str(path))[0] == EXIT_OK
    assert load_corpus(str(path))[0].name == "fixture"


def test_fuzz_trefoil(capsys):
    code, out, _ = run(capsys, "fuzz", "--strands", "2", "--braid", "1 1 1",
                       "--moves", "30", "--trials", "50", "--seed", "7")
    assert code == EXIT_OK
    assert json.loads(out)["status"] == "pass"


def test_fuzz_mirror_check_on_figure_eight(capsys):
    code, out, _ = run(capsys, "fuzz", "--strands", "3", "--braid", "1 -2 1 -2",
                       "--trials", "3", "--mirror-check")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["mirror_check"]["mirror_fingerprint_equal"]
    assert doc["mirror_check"]["status"] == "pass"


def test_svg_to_file(tmp_path, capsys):
    out = tmp_path / "t.svg"
    code = main(["svg", "--diagram", FIXTURE, "--names", "s,r,q,p", "-o", str(out)])
    assert code == EXIT_OK
    assert out.read_text().startswith("<svg")


def test_svg_name_count_is_checked(capsys):
    assert main(["svg", "--diagram", FIXTURE, "--names", "a,b"]) == EXIT_INPUT
