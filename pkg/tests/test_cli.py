import csv
import io
import json

import pytest

from cghzsim import parse
from cghzsim.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_build_emits_parsable_circuit(capsys):
    code, out, err = run_cli(["build", "--n", "2", "--m", "2",
                              "--alpha", "2"], capsys)
    assert code == 0
    res = parse(out)
    assert res.ok
    assert res.circuit.alpha == 2.0


def test_build_to_file_and_run(tmp_path, capsys):
    path = tmp_path / "c.cir"
    code, _, _ = run_cli(["build", "--n", "2", "--m", "2", "--alpha", "2",
                          "-o", str(path)], capsys)
    assert code == 0
    code, out, err = run_cli(["run", str(path)], capsys)
    assert code == 0
    assert "p_success" in out


def test_run_json_payload(tmp_path, capsys):
    path = tmp_path / "c.cir"
    run_cli(["build", "--n", "2", "--m", "2", "--alpha", "3", "-o",
             str(path)], capsys)
    code, out, _ = run_cli(["run", str(path), "--mode", "exact", "--json"],
                           capsys)
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["p_success"] / 0.125 - 1) < 0.01
    assert payload["mode_order"] == ["q1_1", "q1_2", "q2_1", "q2_2"]
    assert len(payload["selections"]) == 3
    assert payload["final_state"]["mode_count"] == 4


def test_run_missing_file(capsys):
    code, _, err = run_cli(["run", "definitely_missing.cir"], capsys)
    assert code == 2
    assert "error" in err


def test_run_invalid_circuit_exits_three(tmp_path, capsys):
    path = tmp_path / "bad.cir"
    path.write_text("alpha 2.0\nbs a b\n")
    code, _, err = run_cli(["run", str(path)], capsys)
    assert code == 3
    assert "unbound" in err


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run"])  # missing file argument
    assert exc.value.code == 1


def test_sweep_csv_grid(capsys):
    code, out, _ = run_cli(["sweep", "--n", "2", "--m", "2",
                            "--alpha", "1:4:0.5", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["alpha", "n", "m", "mode", "fidelity",
                       "p_success_sim", "p_success_theory",
                       "false_vacuum_total", "term_count"]
    assert len(rows) == 1 + 7
    assert [r[0] for r in rows[1:]] == ["1.0", "1.5", "2.0", "2.5", "3.0",
                                        "3.5", "4.0"]


def test_sweep_json_matches_csv_numbers(capsys):
    code, csv_out, _ = run_cli(["sweep", "--n", "2", "--m", "2",
                                "--alpha", "1:2:0.5"], capsys)
    assert code == 0
    code, json_out, _ = run_cli(["sweep", "--n", "2", "--m", "2",
                                 "--alpha", "1:2:0.5", "--format", "json"],
                                capsys)
    assert code == 0
    payload = json.loads(json_out)
    assert payload["version"] == 1
    rows = list(csv.reader(io.StringIO(csv_out)))
    header = rows[0]
    assert len(payload["points"]) == len(rows) - 1
    for row, point in zip(rows[1:], payload["points"]):
        for key, text in zip(header, row):
            value = point[key]
            if isinstance(value, float):
                assert repr(value) == text
            else:
                assert str(value) == text


def test_sweep_single_alpha_value(capsys):
    code, out, _ = run_cli(["sweep", "--n", "1", "--m", "2",
                            "--alpha", "2.0"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 2


def test_sweep_bad_range_is_usage_error(capsys):
    code, _, err = run_cli(["sweep", "--n", "2", "--m", "2",
                            "--alpha", "3:1:0.5"], capsys)
    assert code == 1
    assert "range" in err


def test_target_json(capsys):
    code, out, _ = run_cli(["target", "--n", "2", "--m", "2", "--alpha",
                            "2", "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["mode_count"] == 4
    assert len(payload["terms"]) == 8


def test_target_text_mentions_theory_probability(capsys):
    code, out, _ = run_cli(["target", "--n", "2", "--m", "3",
                            "--alpha", "2"], capsys)
    assert code == 0
    assert "0.03125" in out


def test_oracle_reports_agreement(tmp_path, capsys):
    path = tmp_path / "c.cir"
    run_cli(["build", "--n", "2", "--m", "2", "--alpha", "1", "-o",
             str(path)], capsys)
    code, out, _ = run_cli(["oracle", str(path), "--nmax", "40"], capsys)
    assert code == 0
    assert "agreement within 1e-6: yes" in out


def test_oracle_rejects_wide_circuit(tmp_path, capsys):
    path = tmp_path / "wide.cir"
    run_cli(["build", "--n", "5", "--m", "1", "--alpha", "1", "-o",
             str(path)], capsys)
    code, _, err = run_cli(["oracle", str(path), "--nmax", "10"], capsys)
    assert code == 2
    assert "modes" in err


def test_nm_cap_env_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CGHZ_MAX_NM", "4")
    code, _, err = run_cli(["build", "--n", "3", "--m", "2",
                            "--alpha", "2"], capsys)
    assert code == 2
    assert "cap" in err
    monkeypatch.setenv("CGHZ_MAX_NM", "20")
    code, out, _ = run_cli(["build", "--n", "5", "--m", "4",
                            "--alpha", "2"], capsys)
    assert code == 0
    assert parse(out).ok
    monkeypatch.setenv("CGHZ_MAX_NM", "banana")
    code, _, err = run_cli(["build", "--n", "2", "--m", "2",
                            "--alpha", "2"], capsys)
    assert code == 2
