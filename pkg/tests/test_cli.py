import json

import pytest

from multirel.cli import RunConfig, run
from multirel.corpus import long_short
from multirel.errors import UsageError
from multirel.msset import standard
from multirel.nrelcat import chain_v, chain_w
from multirel.serialize import dumps, msset_to_json, nrel_to_json


def put(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(dumps(doc), encoding="utf-8")
    return str(p)


@pytest.fixture
def edge(tmp_path):
    return put(tmp_path, "edge.json", nrel_to_json(chain_v(1, 1, 1)))


def test_validate_exit_codes(tmp_path, edge, capsys):
    assert run(["validate", "--input", edge]) == 0
    assert "valid: True" in capsys.readouterr().out
    bad = put(tmp_path, "bad.json", nrel_to_json(long_short()))
    assert run(["validate", "--input", bad, "--format", "json"]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["valid"] is False and out["axiom_generation"] is True


def test_usage_errors(tmp_path, edge):
    assert run(["validate"]) == 2
    assert run(["validate", "--input", str(tmp_path / "missing.json")]) == 2
    assert run(["no-such-command"]) == 2
    assert run(["nerve", "--input", edge, "--trunc", "-1"]) == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{", encoding="utf-8")
    assert run(["validate", "--input", str(junk)]) == 2
    assert run(["suite", "--only", "nonsense"]) == 2


def test_budget_exit(tmp_path):
    path = put(tmp_path, "ls.json", nrel_to_json(long_short()))
    assert run(["counit", "--input", path]) == 1
    assert run(["counit", "--input", path, "--budget-len", "1"]) == 3


def test_counit_ok(edge, capsys):
    assert run(["counit", "--input", edge, "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "isomorphism"


def test_nerve_output_round_trips(tmp_path, edge):
    out = tmp_path / "n.json"
    assert run(["nerve", "--input", edge, "--output", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    # the nerve is itself a valid input, and writing it again is byte-identical
    assert run(["validate", "--input", str(out)]) == 0
    again = tmp_path / "n2.json"
    assert run(["k", "--input", str(out), "--output", str(again)]) == 0
    doc = json.loads(again.read_text(encoding="utf-8"))
    assert (len(doc["objects"]), len(doc["generators"])) == (2, 1)
    assert dumps(json.loads(text)) == text


def test_msset_commands(tmp_path, capsys):
    sq = put(tmp_path, "sq.json", msset_to_json(standard((1, 1), 2)))
    assert run(["k", "--input", sq, "--realize", "--format", "json"]) == 0
    realized = json.loads(capsys.readouterr().out)
    assert len(realized["arrows"]) == 9
    assert run(["simplex-cat", "--input", sq, "--string-bound", "1"]) == 0
    capsys.readouterr()
    assert run(["unit", "--input", put(tmp_path, "e.json", msset_to_json(standard((1, 0), 2)))]) == 0
    assert run(["unit", "--input", put(tmp_path, "q.json", msset_to_json(standard((0, 1), 2)))]) == 1


def test_division_and_delta_rel(tmp_path, edge, capsys):
    assert run(["division", "--input", edge, "--string-bound", "2", "--check"]) == 0
    out = tmp_path / "r.json"
    pt = put(tmp_path, "pt.json", msset_to_json(standard((0, 1), 1)))
    assert run(["delta-rel", "--input", pt, "--trunc", "1", "--string-bound", "1", "--output", str(out)]) == 0
    assert run(["validate", "--input", str(out)]) in (0, 1)
    assert run(["colim-check", "--input", pt, "--trunc", "1", "--string-bound", "1"]) == 0
    assert run(["canonical-iso", "--n", "1", "--trunc", "1", "--string-bound", "1"]) == 0


def test_homotopy_and_enrichment(tmp_path, edge):
    assert run(["homotopy", "--p", "1", "--tag", "w"]) == 0
    assert run(["enrich", "--input", edge, "--max-len", "2"]) == 0
    w = put(tmp_path, "w.json", nrel_to_json(chain_w(1, 2)))
    assert run(["grothendieck", "--input", w, "--max-len", "2"]) == 0
    assert run(["grothendieck", "--input", w, "--source", "nowhere"]) == 2


def test_suite_subset(capsys):
    assert run(["suite", "--only", "embed-restrict", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["key"] for r in doc["results"]] == ["embed-restrict"]


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("validate", [], -1, 2, 8, 10, None, "human", 1)
    with pytest.raises(UsageError):
        RunConfig("validate", [], 2, 2, 8, 10, None, "yaml", 1)
