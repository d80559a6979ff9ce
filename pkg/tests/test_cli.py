import json
from pathlib import Path

import jsonschema
import pytest

from hiddensym.cli import main

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc, out


def test_reduce_examples(capsys):
    assert run(capsys, "reduce", "(Sigma . rhat)^2")[1].strip() == "1"
    assert run(capsys, "reduce", "[A2, H]")[1].strip() == "0"
    code, out, _ = run(capsys, "reduce", "[A1, H]")
    assert code == 0 and "gamma5" in out and "a^" not in out


def test_reduce_json(capsys):
    code, doc, _ = run_json(capsys, "reduce", "{K, Sigma . rhat}")
    assert code == 0 and doc["is_zero"] and doc["canonical"] == "0"


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "reduce", "[K, Sigma . p")
    assert code == 2 and "line 1, column 14" in err and "^" in err
    assert run(capsys, "reduce", "p_7")[0] == 2
    assert run(capsys, "reduce", "bogus")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "spectrum")[0] == 2
    assert run(capsys, "verify", "nope", "--no-oracle")[0] == 2


def test_verify_symbolic(capsys):
    code, out, _ = run(capsys, "verify", "--no-oracle")
    assert code == 0 and "16/16 passed" in out


def test_verify_single_report(capsys):
    code, doc, _ = run_json(capsys, "verify", "A2_conserved", "--no-oracle")
    assert code == 0 and [r["name"] for r in doc["reports"]] == ["A2_conserved"]


def test_verify_with_small_oracle(capsys):
    code, doc, _ = run_json(capsys, "verify", "odd_relation", "--points", "6", "--seed", "4")
    assert code == 0
    assert doc["reports"][0]["oracle_verdict"] == "ORACLE_PASS"
    assert doc["config"]["oracle"]["seed"] == 4


def test_verify_mutation_fails(capsys):
    code, out, _ = run(capsys, "verify", "A2_conserved", "--no-oracle", "--mutate", "A2_first_term_double")
    assert code == 1 and "first failure: A2_conserved" in out


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    assert code == 0 and "superalgebra" in out and "H_mass_double" in out


def test_timings_flag(capsys):
    _, plain, _ = run(capsys, "verify", "odd_relation", "--no-oracle", "--json")
    _, timed, _ = run(capsys, "verify", "odd_relation", "--no-oracle", "--json", "--timings")
    assert "wall_time" not in plain and "wall_time" in timed


def test_json_byte_identical(capsys):
    args = ("verify", "JL_equivalence", "lamb_breaking", "--points", "4")
    _, _, first = run_json(capsys, *args)
    _, _, second = run_json(capsys, *args)
    assert first == second


def test_spectrum_degenerate_pairs(capsys):
    code, doc, _ = run_json(capsys, "spectrum", "--a", "0.0729735", "--k", "-1", "1", "--count", "3")
    assert code == 0 and doc["passed"]
    assert sum(lv["partner_energy"] is not None for lv in doc["levels"]) == 4
    assert doc["ground_state"]["passed"]


def test_spectrum_errors(capsys):
    code, _, err = run(capsys, "spectrum", "--a", "0")
    assert code == 2 and "no bound states" in err
    code, _, err = run(capsys, "spectrum", "--a", "1.5", "--k", "1")
    assert code == 2 and "not below" in err


def test_spectrum_convergence_failure(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"version": 1, "spectrum": {"nodes": 40}}))
    code, _, err = run(capsys, "spectrum", "--a", "0.3", "--k", "-1", "--config", str(cfg), "--tolerance", "1e-9")
    assert code == 3 and "convergence" in err


def test_spectrum_text_table(capsys):
    code, out, _ = run(capsys, "spectrum", "--a", "0.3", "--k", "-1", "--count", "2")
    assert code == 0
    header = out.splitlines()[1].split()
    assert header[:3] == ["k", "n_r", "E/m"]


def test_lamb(capsys):
    code, doc, _ = run_json(capsys, "lamb", "--power", "-2", "--points", "6")
    assert code == 0
    assert doc["report"]["details"]["oracle_ratio"] == pytest.approx(2.0, abs=1e-3)
    assert doc["oracle_norms"]["0"] < 1e-6 * doc["oracle_norms"]["1"]


def test_lamb_out_of_range(capsys):
    assert run(capsys, "lamb", "--power", "4", "--no-oracle")[0] == 2


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "[A2, H]", "--points", "5")
    assert code == 0 and "ORACLE_PASS" in out
    code, doc, _ = run_json(capsys, "oracle", "A2", "--against", "JL_form", "--points", "5")
    assert code == 0 and all(c["verdict"] == "PASS" for c in doc["checks"])
    code, _, _ = run(capsys, "oracle", "A2", "--against", "Sigma . rhat", "--points", "5")
    assert code == 1


def test_config_file_and_overrides(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"version": 1, "oracle": {"points": 7, "seed": 9}}))
    _, doc, _ = run_json(capsys, "config", "--config", str(cfg), "--seed", "2")
    assert doc["config"]["oracle"]["points"] == 7
    code, out, _ = run(capsys, "config", "--config", str(cfg), "--seed", "2")
    parsed = json.loads(out)
    assert parsed["oracle"]["points"] == 7 and parsed["oracle"]["seed"] == 2


@pytest.mark.parametrize("body", ['{"version": 2}', '{"oracle": {"pointz": 3}}', '{"extra": {}}', "not json"])
def test_bad_config(capsys, tmp_path, body):
    cfg = tmp_path / "c.json"
    cfg.write_text(body)
    assert run(capsys, "config", "--config", str(cfg))[0] == 2


def test_shipped_example_config_is_valid(capsys):
    path = Path(__file__).resolve().parents[1] / "docs" / "config.example.json"
    assert run(capsys, "config", "--config", str(path))[0] == 0
