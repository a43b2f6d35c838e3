import json

from tickettriage.cli import main


def test_savings_command_prints_hours_and_note(capsys):
    rc = main(["savings", "--tickets-per-year", "1200000",
               "--assign-coverage", "0.9", "--resolve-coverage", "0.8"])
    out = capsys.readouterr().out
    assert rc == 0
    payload = json.loads(out.splitlines()[0])
    assert payload == {"assign_hours": 54000.0, "resolve_hours": 160000.0,
                       "total_hours": 214000.0}
    assert "194,000" in out
    assert "214,000" in out


def test_invalid_coverage_is_a_usage_error(capsys):
    rc = main(["savings", "--tickets-per-year", "1000",
               "--assign-coverage", "2.0", "--resolve-coverage", "0.5"])
    assert rc == 2


def test_bad_config_key_is_a_usage_error(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sede = 7\n")
    rc = main(["gen", "--out", str(tmp_path / "c"), "--config", str(cfg)])
    assert rc == 2


def test_missing_bundle_is_a_runtime_failure(tmp_path, capsys):
    rc = main(["triage", "--bundle", str(tmp_path / "missing.bin"),
               "--text", "printer is broken"])
    assert rc == 3


def test_triage_single_text(bundle_path, capsys):
    rc = main(["triage", "--bundle", bundle_path, "--text",
               "Vpn drops every hour on Windows 10. VPN Client reported Error 789."])
    out = capsys.readouterr().out
    assert rc == 0
    row = json.loads(out.splitlines()[0])
    assert row["mode"] == "text"
    assert row["path"] in ("short_head", "long_tail")
    assert "resolver_group" in row and "resolutions" in row


def test_eval_command_reports_both_modes(bundle_path, corpus_dir, capsys):
    rc = main(["eval", "--bundle", bundle_path, "--corpus", corpus_dir,
               "--limit", "20"])
    out = capsys.readouterr().out
    assert rc == 0
    summaries = [json.loads(line) for line in out.splitlines()
                 if line.startswith("{")]
    assert {s["mode"] for s in summaries} == {"text", "multimodal"}
    for s in summaries:
        assert s["n"] == 20
        assert 0.0 <= s["routing_coverage"] <= 1.0


def test_gen_command_writes_corpus(tmp_path, capsys):
    rc = main(["gen", "--out", str(tmp_path / "c"), "--count", "30", "--seed", "9"])
    out = capsys.readouterr().out
    assert rc == 0
    paths = json.loads(out.splitlines()[0])
    assert (tmp_path / "c" / "tickets.jsonl").exists()
    assert paths["tickets"].endswith("tickets.jsonl")
