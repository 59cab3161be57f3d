import json
from pathlib import Path

import jsonschema
import pytest

from lucascert.cli import dispatch, load_config_file

SCHEMA_DIR = Path(__file__).parent.parent / "src" / "lucascert" / "schema"
CLI_SCHEMA = json.loads((SCHEMA_DIR / "cli_report.schema.json").read_text())
CERT_SCHEMA = json.loads((SCHEMA_DIR / "certificate.schema.json").read_text())
VERDICT_SCHEMA = json.loads((SCHEMA_DIR / "verdicts.schema.json").read_text())


def run_json(argv: list[str], capsys) -> tuple[int, dict]:
    code = dispatch(argv + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_seq_lucas_value(capsys):
    assert dispatch(["seq", "--lucas", "10"]) == 0
    assert capsys.readouterr().out.strip() == "123"


def test_seq_period_mod8(capsys):
    code, doc = run_json(["seq", "--period", "--modulus", "8"], capsys)
    assert code == 0
    assert doc["period"] == 12
    assert doc["residues"] == [2, 1, 3, 4, 7, 3, 2, 5, 7, 4, 3, 7, 2, 1]
    jsonschema.validate(doc, CLI_SCHEMA)


def test_seq_text_json_verdict_parity(capsys):
    text_code = dispatch(["seq", "--identities", "40"])
    text_out = capsys.readouterr().out
    json_code, doc = run_json(["seq", "--identities", "40"], capsys)
    assert text_code == json_code == 0
    assert "all hold" in text_out
    assert doc["verdict"] == "ok"


def test_usage_errors_exit_2(capsys):
    assert dispatch(["no-such-command"]) == 2
    assert dispatch(["seq"]) == 2                     # no query selected
    assert dispatch(["seq", "--period"]) == 2         # missing modulus
    assert dispatch(["seq", "--period", "--modulus", "1"]) == 2
    assert dispatch(["check-ineq", "--which", "bogus"]) == 2
    assert dispatch(["proof"]) == 2                   # needs --full or --step
    capsys.readouterr()


def test_negative_index_is_usage_error(capsys):
    assert dispatch(["seq", "--lucas", "-3"]) == 2
    capsys.readouterr()


def test_rank_single_prime(capsys):
    code, doc = run_json(["rank", "--prime", "7"], capsys)
    assert code == 0
    assert doc["rank"] == 8 and doc["wall_exponent"] == 1


def test_rank_csv_and_figure(tmp_path, capsys):
    csv_path = tmp_path / "ranks.csv"
    fig_path = tmp_path / "ranks.png"
    code = dispatch(["rank", "--limit", "100", "--csv", str(csv_path),
                     "--figure", str(fig_path)])
    capsys.readouterr()
    assert code == 0
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0] == "prime,rank,wall_exponent"
    assert lines[1] == "3,4,1"
    assert fig_path.stat().st_size > 0


def test_wall_scan_exit_and_schema(capsys):
    code, doc = run_json(["wall-scan", "--limit", "500"], capsys)
    assert code == 0
    assert doc["exceptions"] == []
    jsonschema.validate(doc, CLI_SCHEMA)


def test_primitive_schema(capsys):
    code, doc = run_json(["primitive", "--index", "6", "--kind", "lucas"],
                         capsys)
    assert code == 0
    assert doc["exceptional"] is True
    jsonschema.validate(doc, CLI_SCHEMA)


def test_lehmer_search_stream(tmp_path, capsys):
    stream = tmp_path / "verdicts.jsonl"
    fig = tmp_path / "verdicts.png"
    code, doc = run_json(["lehmer-search", "--max-index", "25",
                          "--jsonl", str(stream), "--figure", str(fig)],
                         capsys)
    assert code == 0
    assert doc["lehmer_hits"] == [] and doc["undecided"] == []
    jsonschema.validate(doc, CLI_SCHEMA)
    lines = stream.read_text().strip().split("\n")
    assert len(lines) == 24
    for line in lines:
        jsonschema.validate(json.loads(line), VERDICT_SCHEMA)
    assert fig.stat().st_size > 0


def test_check_ineq_final_range(capsys):
    code, doc = run_json(["check-ineq", "--which", "final",
                          "--range", "97:300"], capsys)
    assert code == 0
    assert doc["findings"] == []
    jsonschema.validate(doc, CLI_SCHEMA)


def test_check_ineq_eq9_reports_satisfying(tmp_path, capsys):
    csv_path = tmp_path / "eq9.csv"
    code, doc = run_json(["check-ineq", "--which", "eq9", "--range", "2:50",
                          "--csv", str(csv_path)], capsys)
    assert code == 0
    rows = csv_path.read_text().strip().split("\n")
    assert rows[0] == "point,lhs,rhs_lo,rhs_hi,holds"
    satisfied = [r for r in rows[1:] if r.endswith("True")]
    assert len(satisfied) == 1 and satisfied[0].startswith("5,")


def test_check_ineq_imp(capsys):
    code, doc = run_json(["check-ineq", "--which", "imp", "--range", "11:31"],
                         capsys)
    assert code == 0
    assert doc["findings"] == [] and doc["skipped"] == []


def test_proof_single_step(capsys):
    code, doc = run_json(["proof", "--step", "constants"], capsys)
    assert code == 0
    assert doc["step"]["status"] == "verified"
    assert doc["step"]["evidence"]["minimal_index"] == 92


def test_proof_unknown_step(capsys):
    assert dispatch(["proof", "--step", "nope"]) == 2
    capsys.readouterr()


def test_config_file_loading(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("workers = 3\nseed=9\nformat = json\n# comment\n")
    values = load_config_file(path)
    assert values == {"workers": 3, "seed": 9, "format": "json"}
    bad = tmp_path / "bad.conf"
    bad.write_text("nonsense_key = 1\n")
    with pytest.raises(ValueError):
        load_config_file(bad)
    malformed = tmp_path / "malformed.conf"
    malformed.write_text("workers\n")
    with pytest.raises(ValueError):
        load_config_file(malformed)


def test_config_env_var(tmp_path, capsys, monkeypatch):
    path = tmp_path / "run.conf"
    path.write_text("seed = 42\n")
    monkeypatch.setenv("LUCASCERT_CONFIG", str(path))
    code, doc = run_json(["lehmer-search", "--max-index", "5"], capsys)
    assert code == 0
    assert doc["config"]["seed"] == 42


def test_flag_overrides_config(tmp_path, capsys, monkeypatch):
    path = tmp_path / "run.conf"
    path.write_text("seed = 42\nworkers = 2\n")
    monkeypatch.setenv("LUCASCERT_CONFIG", str(path))
    code, doc = run_json(["lehmer-search", "--max-index", "5",
                          "--seed", "7"], capsys)
    assert code == 0
    assert doc["config"]["seed"] == 7
    assert doc["config"]["workers"] == 2


def test_output_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = dispatch(["wall-scan", "--limit", "200", "--format", "json",
                     "--output", str(out)])
    capsys.readouterr()
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["command"] == "wall-scan"
    jsonschema.validate(doc, CLI_SCHEMA)
