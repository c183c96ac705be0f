import json

import numpy as np
import pytest

from infotherm.cli import main, parse_config, run_scenario
from infotherm.errors import ConfigError
from infotherm.tapeio import read_bits


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


class TestParse:
    def test_minimal_peres(self):
        cfg = parse_config("scenario: peres\nn: 1\nT: 1\n")
        assert cfg.params.n == 1.0 and cfg.params.memory_booking == "merge"
        assert cfg.seed is None and cfg.formats == ("json", "csv", "bits")

    def test_json_document(self):
        cfg = parse_config('{"scenario": "distinguish", "n_max": 3}')
        assert cfg.params.n_max == 3 and cfg.params.pair == "0,plus"

    def test_ordering(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("scenario: demon\nseed: 1\nv_L: 1\nv_T: 0.5\nv_H: 3\n")
        assert "v_L < v_T < v_H" in str(exc.value)

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("scenario: peres\ntemprature: 3\n")
        assert exc.value.path == "peres.temprature"
        assert "temprature" in str(exc.value)

    def test_seed_required(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("scenario: demon\n")
        assert exc.value.path == "seed"
        with pytest.raises(ConfigError):
            parse_config("scenario: entropy\n")
        assert parse_config("scenario: entropy\ninput: x.bits\n").seed is None

    @pytest.mark.parametrize("doc", [
        "n: 1\n",
        "scenario: magic\n",
        "scenario: peres\nn: one\n",
        "scenario: peres\nformats: [json, png]\n",
        "scenario: demon\nseed: -3\n",
        "scenario: peres\nmemory_booking: never\n",
        "- a\n- b\n",
        "scenario: peres\nn: [1\n",
    ])
    def test_rejects(self, doc):
        with pytest.raises(ConfigError):
            parse_config(doc)

    def test_resolved_echoes_defaults(self):
        d = parse_config("scenario: demon\nseed: 7\n").resolved()
        assert d["params"]["molecules"] == 1000 and d["params"]["tail_steps"] == 2048


class TestRun:
    def test_peres(self, tmp_path, capsys):
        code, out = run(["peres", "--n", "1", "--T", "1", "--out", str(tmp_path)], capsys)
        assert code == 0
        rep = json.loads((tmp_path / "peres_report.json").read_text())
        assert rep["paradox_exhibited"] and rep["second_law_restored"]
        assert "paradox_exhibited=True" in out.out
        man = json.loads((tmp_path / "peres_manifest.json").read_text())
        assert man["config"]["params"]["T"] == 1.0
        assert {"started_at", "wall_time_s", "versions"} <= set(man)
        assert not (tmp_path / "peres_membrane.bits").exists()

    def test_peres_with_tape(self, tmp_path, capsys):
        code, _ = run(["peres", "--seed", "3", "--out", str(tmp_path)], capsys)
        assert code == 0
        assert read_bits(tmp_path / "peres_membrane.bits").size == 4096
        rep = json.loads((tmp_path / "peres_report.json").read_text())
        assert rep["membrane_tape"]["estimate_bits"] >= 3686

    def test_demon(self, tmp_path, capsys):
        code, out = run(["demon", "--molecules", "1000", "--alpha", "0.5", "--steps", "20000",
                         "--seed", "7", "--out", str(tmp_path)], capsys)
        assert code == 0 and "sorted=True" in out.out
        bits = read_bits(tmp_path / "demon_tape.bits")
        rep = json.loads((tmp_path / "demon_report.json").read_text())
        assert bits.size == rep["steps_taken"] and not bits[rep["n_ord"]:].any()
        head = (tmp_path / "demon_entropy.csv").read_text().splitlines()[0]
        assert head == "step,I_estimate_bits,borel_deviation"
        assert (tmp_path / "demon_trajectory.csv").read_bytes().count(b"\r") == 0

    def test_distinguish(self, tmp_path, capsys):
        code, _ = run(["distinguish", "--pair", "0,plus", "--n-max", "8", "--out", str(tmp_path)], capsys)
        assert code == 0
        rows = (tmp_path / "distinguish.csv").read_text().splitlines()
        assert rows[0] == "n,closed_form,explicit" and len(rows) == 9
        assert float(rows[8].split(",")[1]) == pytest.approx(0.9990224819584785, abs=1e-12)
        assert rows[8].split(",")[2] == ""
        rep = json.loads((tmp_path / "distinguish_report.json").read_text())
        assert not rep["clone_check"]["cloner_possible"]

    def test_entropy_from_file(self, tmp_path, capsys):
        assert main(["entropy", "--seed", "2", "--q", "0.2", "--out", str(tmp_path / "a")]) == 0
        src = tmp_path / "a" / "entropy_tape.bits"
        code, _ = run(["entropy", "--input", str(src), "--out", str(tmp_path / "b")], capsys)
        assert code == 0
        a = json.loads((tmp_path / "a" / "entropy_report.json").read_text())
        b = json.loads((tmp_path / "b" / "entropy_report.json").read_text())
        assert a["ledger_bits"] == b["ledger_bits"]
        led = a["ledger_bits"]
        assert led["bennett"] == led["H_prob"] + led["I_alg_estimate"]

    def test_format_filter(self, tmp_path, capsys):
        run(["demon", "--seed", "1", "--molecules", "50", "--format", "csv", "--out", str(tmp_path)], capsys)
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == ["demon_entropy.csv", "demon_manifest.json", "demon_trajectory.csv"]

    def test_config_file_and_override(self, tmp_path, capsys):
        cfg = tmp_path / "c.yaml"
        cfg.write_text(f"scenario: peres\nn: 2\nT: 1\noutput_dir: {tmp_path}\n")
        assert run(["peres", "--config", str(cfg), "--T", "3"], capsys)[0] == 0
        rep = json.loads((tmp_path / "peres_report.json").read_text())
        assert rep["n"] == 2 and rep["T"] == 3

    def test_config_errors_exit_one(self, tmp_path, capsys):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("scenario: peres\ntemprature: 1\n")
        code, out = run(["peres", "--config", str(cfg)], capsys)
        assert code == 1 and "temprature" in out.err
        code, out = run(["demon", "--out", str(tmp_path)], capsys)
        assert code == 1 and "seed" in out.err
        assert run(["peres", "--config", str(tmp_path / "missing.yaml")], capsys)[0] == 1

    def test_io_failure_exit_one(self, tmp_path, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        code, out = run(["peres", "--out", str(blocker / "sub")], capsys)
        assert code == 1 and "cannot write" in out.err

    def test_strict_audit(self, tmp_path, capsys, monkeypatch):
        assert run(["peres", "--strict-audit", "--out", str(tmp_path)], capsys)[0] == 0
        import infotherm.cli as cli
        real = cli.RUNNERS["peres"]

        def failing(cfg):
            artifacts, summary, _ = real(cfg)
            return artifacts, summary, True
        monkeypatch.setitem(cli.RUNNERS, "peres", failing)
        assert run(["peres", "--strict-audit", "--out", str(tmp_path)], capsys)[0] == 2
        assert run(["peres", "--out", str(tmp_path)], capsys)[0] == 0

    def test_run_scenario_api(self, tmp_path):
        cfg = parse_config(f"scenario: distinguish\nn_max: 2\noutput_dir: {tmp_path}\nformats: json\n")
        assert run_scenario(cfg, stdout=open("/dev/null", "w")) == 0
        assert (tmp_path / "distinguish_report.json").exists()
        assert not (tmp_path / "distinguish.csv").exists()
