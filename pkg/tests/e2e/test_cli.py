# -*- coding: utf-8 -*-
import json

import pytest

from noisy_emergence.api.cli import EXIT_CONFIG, EXIT_NOT_CERTIFIED, EXIT_OK, main


@pytest.fixture
def flocking_file(scenarios_dir):
    return str(scenarios_dir / "flocking_2d.json")


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


class TestCommands:

    def test_constants_prints_json(self, capsys, flocking_file):
        assert main(["constants", flocking_file]) == EXIT_OK
        body = json.loads(capsys.readouterr().out)
        assert body["variant"] == "I(D)"
        assert body["applicable"] is True

    def test_check_of_a_certified_scenario(self, capsys, flocking_file):
        assert main(["check", flocking_file, "--require-certified"]) == EXIT_OK
        captured = capsys.readouterr()
        assert json.loads(captured.out)["certified"] is True
        assert "✓" in captured.err

    def test_simulate_writes_the_trace(self, capsys, tmp_path, flocking_file):
        trace = tmp_path / "traza.csv"
        assert main(["simulate", flocking_file, "--trial", "4", "--trace", str(trace)]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["trial"] == 4
        header = trace.read_text(encoding="utf-8").splitlines()[0]
        assert header == "t,time,norm_x,norm_y,phi,noise_norm,clipped_flag"

    def test_montecarlo_summary_is_reproducible(self, tmp_path, flocking_file):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["montecarlo", flocking_file, "-n", "6", "--out", str(first)]) == EXIT_OK
        assert main(["montecarlo", flocking_file, "-n", "6", "--out", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
        summary = json.loads(first.read_text(encoding="utf-8"))
        assert summary["trials"] == 6
        assert summary["verdict"] == "respected"

    def test_sweep_csv(self, tmp_path, flocking_file, scenarios_dir):
        out = tmp_path / "barrido.csv"
        code = main(["sweep", flocking_file, "--grid", str(scenarios_dir / "malla_nu.json"),
                     "-n", "2", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "targets.nu,T,empirical,wilson_lo,wilson_hi,bound,verdict,error"
        assert len(lines) == 5


class TestExitCodes:

    def test_unknown_key(self, capsys, tmp_path):
        path = _write(tmp_path, "malo.json", {"preset": "flocking-2d", "noise": {"y": {"radious": 0.1}}})
        assert main(["check", path]) == EXIT_CONFIG
        assert "noise.y.radious" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["constants", str(tmp_path / "no_existe.json")]) == EXIT_CONFIG

    def test_usage_error(self):
        assert main([]) == EXIT_CONFIG
        assert main(["montecarlo"]) == EXIT_CONFIG

    def test_uncertified_scenario_with_require_certified(self, tmp_path):
        path = _write(tmp_path, "fuerte.json", {"preset": "flocking-2d", "params": {"coupling": 1000.0}})
        assert main(["check", path, "--require-certified"]) == EXIT_NOT_CERTIFIED
        assert main(["montecarlo", path, "-n", "2", "--require-certified"]) == EXIT_NOT_CERTIFIED
        assert main(["check", path]) == EXIT_OK
