import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from lipop.cli import main, sweep_csv
from lipop.corpus import builtin_corpus, builtin_corpus_spec, generate_builtin_corpus
from lipop.errors import SpecError
from lipop.scenario import Scenario, corpus_to_spec, parse_corpus, validate

EXAMPLES = Path(__file__).resolve().parents[1] / "docs" / "examples"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_identity_json(capsys):
    code, out, _ = run(["analyze", str(EXAMPLES / "identity.json"), "--json"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["bounded_verdict"] == "bounded"
    assert rep["compact_verdict"] == "not_compact"
    assert rep["q_value"] == pytest.approx(1.0)
    assert rep["lower_bound"]["value"] >= 1 - 1e-6


def test_analyze_half_dilation(capsys):
    code, out, _ = run(["analyze", str(EXAMPLES / "half.json")], capsys)
    assert code == 0
    assert "compact         compact" in out


def test_analyze_unbounded_still_exits_zero(capsys):
    code, out, _ = run(["analyze", str(EXAMPLES / "unbounded.json"), "--json"], capsys)
    assert code == 0
    assert json.loads(out)["bounded_verdict"] == "unbounded"


def test_malformed_input_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["analyze", str(bad)], capsys)[0] == 2
    bad.write_text(json.dumps({"id": "x", "alpha": 0.5}))
    code, _, err = run(["analyze", str(bad)], capsys)
    assert code == 2 and "required" in err
    assert run(["analyze", str(tmp_path / "missing.json")], capsys)[0] == 2


def test_not_a_self_map_is_input_error(tmp_path, capsys):
    doc = json.loads((EXAMPLES / "identity.json").read_text())
    doc["phi"] = {"kind": "affine", "s": 1, "c": 0.5}
    p = tmp_path / "s.json"
    p.write_text(json.dumps(doc))
    assert run(["analyze", str(p)], capsys)[0] == 2


def test_evaluation_error_exit_three(tmp_path, capsys, monkeypatch):
    from lipop.errors import EvaluationError

    def boom(*a, **k):
        raise EvaluationError("NaN", point=0.5)

    monkeypatch.setattr("lipop.cli.full_report", boom)
    assert run(["analyze", str(EXAMPLES / "identity.json")], capsys)[0] == 3


@pytest.mark.parametrize(
    "fname, flag, want",
    [("z.json", ["--alpha", "0.5"], 1.0), ("z2.json", ["--alpha", "0.5"], 1.0), ("const03.json", ["--alpha", "0.5"], 3.0),
     ("z.json", ["--lip1"], 2.0), ("z.json", ["--nu", "1"], 0.3849001795)],
)
def test_norm_command(fname, flag, want, capsys):
    code, out, _ = run(["norm", str(EXAMPLES / fname), *flag], capsys)
    assert code == 0
    assert float(out.split()[1]) == pytest.approx(want, abs=1e-6)
    assert out.splitlines()[1].startswith("witness")


def test_sweep_empty_and_small(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text('{"scenarios": []}')
    out = tmp_path / "e.csv"
    assert run(["sweep", str(empty), str(out)], capsys)[0] == 0
    assert out.read_text().splitlines() == ["scenario_id,alpha,beta,q,psi_norm,C,L,ratio,bounded_verdict,compact_verdict"]
    out = tmp_path / "s.csv"
    assert run(["sweep", str(EXAMPLES / "small_corpus.json"), str(out)], capsys)[0] == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 3
    unb = rows[2]
    assert unb["bounded_verdict"] == "unbounded" and unb["ratio"] == "" and unb["L"] == ""


def test_verify_corrupted_tolerance(monkeypatch, capsys):
    monkeypatch.setenv("LIPOP_TOL_SCALE", "0")
    code, out, err = run(["verify", "--suite", "identities"], capsys)
    assert code == 1
    assert "FAIL" in out and "first counterexample" in err


def test_verify_criteria_passes(capsys):
    code, out, _ = run(["verify", "--suite", "criteria"], capsys)
    assert code == 0, out


def test_verify_identities_passes(capsys):
    code, out, _ = run(["verify", "--suite", "identities"], capsys)
    assert code == 0, out


def test_verify_norms_passes(capsys):
    code, out, _ = run(["verify", "--suite", "norms"], capsys)
    assert code == 0, out


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "lipop.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "lipop" in res.stdout


def test_builtin_corpus_is_pinned():
    assert corpus_to_spec(generate_builtin_corpus()) == builtin_corpus_spec()


def test_scenarios_round_trip():
    for sc in builtin_corpus():
        spec = sc.to_spec()
        again = Scenario.from_spec(json.loads(json.dumps(spec)))
        assert again.to_spec() == spec


def test_schema_rejects():
    good = json.loads((EXAMPLES / "identity.json").read_text())
    validate(good, "scenario.schema.json")
    for patch in ({"alpha": 0}, {"X": {"dim": 0}}, {"phi": {"kind": "spline"}}, {"extra": 1}, {"psi": []}):
        with pytest.raises(SpecError):
            validate({**good, **patch}, "scenario.schema.json")
    with pytest.raises(SpecError):
        parse_corpus({"scenarios": [good, good]})


def test_psi_grid_shape_checked():
    good = json.loads((EXAMPLES / "identity.json").read_text())
    good["Y"] = {"dim": 2}
    with pytest.raises(SpecError):
        Scenario.from_spec(good)


def test_sweep_csv_formatting():
    class Row:
        scenario_id, alpha, beta, q, psi_norm, C, L, ratio = "a", 0.5, 0.5, 1 / 3, 1.0, 1.0, None, None
        bounded_verdict, compact_verdict = "unbounded", "inconclusive"

    text = sweep_csv([Row()])
    assert text.splitlines()[1] == "a,0.5,0.5,0.333333333333,1,1,,,unbounded,inconclusive"
