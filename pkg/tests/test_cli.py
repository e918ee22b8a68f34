"""Command line interface driven in-process through main(argv)."""

import json
import shutil
import subprocess

import pytest

from fspde_split import __version__
from fspde_split.cli import main
from fspde_split.noise import sample_noise_lattice


def _write_config(tmp_path, **overrides):
    cfg = {
        "T": 1.0,
        "N": 4,
        "eps": 1.0,
        "hurst": 0.7,
        "x0": "sin_pi",
        "seed": 5,
        "drift": {"f": "poly_odd", "g": "identity", "q": 1},
        "L_ref": 16,
        "L_list": [4, 8],
        "M": 4,
    }
    cfg.update(overrides)
    path = tmp_path / "study.json"
    path.write_text(json.dumps(cfg))
    return path


class TestStudyCommand:
    def test_runs_and_emits_files(self, tmp_path, capsys):
        config = _write_config(tmp_path)
        out = tmp_path / "results"
        assert main(["study", "--config", str(config), "--out", str(out)]) == 0
        captured = capsys.readouterr()
        assert "fitted slope" in captured.out
        assert "dt,rms_error,std_error" in captured.out
        assert (out / "rates.csv").exists()
        assert (out / "report.json").exists()
        assert (out / "rates.gp").exists()

    def test_band_pass_and_fail(self, tmp_path, capsys):
        config = _write_config(tmp_path, slope_band=[-5.0, 5.0])
        assert main(["study", "--config", str(config)]) == 0
        assert "within band" in capsys.readouterr().out

        config = _write_config(tmp_path, slope_band=[10.0, 11.0])
        assert main(["study", "--config", str(config)]) == 2
        assert "outside band" in capsys.readouterr().err

    def test_seed_override_lands_in_report(self, tmp_path, capsys):
        config = _write_config(tmp_path)
        out = tmp_path / "r"
        assert main(["study", "--config", str(config), "--seed", "99", "--out", str(out)]) == 0
        assert "seed 99" in capsys.readouterr().out
        payload = json.loads((out / "report.json").read_text())
        assert payload["seed"] == 99
        assert payload["config"]["seed"] == 99

    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["study", "--config", str(tmp_path / "absent.json")]) == 1
        assert "error" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["study", "--config", str(bad)]) == 1

    def test_invalid_config_values(self, tmp_path, capsys):
        config = _write_config(tmp_path, hurst=0.2)
        assert main(["study", "--config", str(config)]) == 1
        assert "invalid config" in capsys.readouterr().err

    def test_config_rejected_by_scheme(self, tmp_path, capsys):
        # passes request validation, fails when the run is assembled
        config = _write_config(tmp_path, L_list=[5])
        assert main(["study", "--config", str(config)]) == 1


class TestVerifyLemmasCommand:
    def test_writes_json_report(self, tmp_path, capsys):
        out = tmp_path / "lemmas.json"
        code = main(["verify-lemmas", "--hurst", "0.7", "--fast", "--out", str(out)])
        assert code == 0
        captured = capsys.readouterr()
        assert "report:" in captured.out
        assert "ok" in captured.err
        payload = json.loads(out.read_text())
        assert payload["passed"] is True
        assert len(payload["checks"]) == 5

    def test_stdout_json_when_no_out(self, capsys):
        assert main(["verify-lemmas", "--hurst", "0.7", "--fast"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["hurst"] == 0.7


class TestSampleNoiseCommand:
    def test_writes_expected_csv(self, tmp_path):
        out = tmp_path / "noise.csv"
        code = main(
            [
                "sample-noise",
                "--hurst",
                "0.5",
                "--steps",
                "8",
                "--modes",
                "2",
                "--seed",
                "3",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "mode,step,value"
        assert len(lines) == 1 + 2 * 8

        reference = tmp_path / "direct.csv"
        sample_noise_lattice(2, 8, 0.5, 1 / 8, seed=3).to_csv(reference)
        assert out.read_bytes() == reference.read_bytes()

    def test_rejects_bad_hurst(self, capsys):
        assert main(["sample-noise", "--hurst", "1.5", "--steps", "4", "--out", "x.csv"]) == 1


class TestUsage:
    def test_no_command_raises(self):
        with pytest.raises(SystemExit):
            main([])

    def test_missing_required_flag(self):
        with pytest.raises(SystemExit) as err:
            main(["study"])
        assert "error" in str(err.value)

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["--version"])
        assert err.value.code == 0
        assert f"fspde-split {__version__}" in capsys.readouterr().out

    def test_installed_entry_point(self):
        exe = shutil.which("fspde-split")
        assert exe is not None, "console script not installed"
        proc = subprocess.run([exe, "--version"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert __version__ in proc.stdout
