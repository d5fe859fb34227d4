import json

import pytest

from sqglab.cli import main, validate_config
from sqglab.errors import ConfigurationError


class TestConfigValidation:
    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigurationError, match="mystery"):
            validate_config({"command": "verify", "mystery": 1})

    def test_unknown_param_named(self):
        with pytest.raises(ConfigurationError, match="warp"):
            validate_config({"command": "simulate", "params": {"warp": 9}})

    def test_unknown_command(self):
        with pytest.raises(ConfigurationError, match="fly"):
            validate_config({"command": "fly"})

    def test_cli_reports_usage_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"command": "simulate", "params": {"nope": 1}}))
        assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 2


class TestVerifyCommand:
    def test_empty_checks_immediate_success(self, tmp_path):
        rc = main(["verify", "--out", str(tmp_path), "--seed", "1"])
        assert rc == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["params"]["checks"] == []
        assert (tmp_path / "reports.csv").read_text().startswith("check_id")

    def test_bernstein_single_grid(self, tmp_path):
        rc = main(["verify", "--check", "bernstein", "--n", "128",
                   "--out", str(tmp_path), "--seed", "3"])
        assert rc == 0
        rows = (tmp_path / "reports.csv").read_text().splitlines()
        assert len(rows) > 10


class TestSimulateCommand:
    def test_radial_run_small(self, tmp_path):
        rc = main(["simulate", "--ic", "radial", "--n-side", "128", "--dt", "0.005",
                   "--t-end", "0.05", "--c-existence", "0", "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "theta_final.fld").exists()
        norms = (tmp_path / "norms.csv").read_text().splitlines()
        assert norms[0] == "t,kind,value"
        assert len(norms) > 2

    def test_checkpoints_at_cadence(self, tmp_path):
        rc = main(["simulate", "--ic", "single_mode", "--n-side", "64", "--dt", "0.01",
                   "--t-end", "0.04", "--c-existence", "0", "--sample-every", "2",
                   "--checkpoints", "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "theta_0000.fld").exists()
        assert (tmp_path / "theta_0002.fld").exists()

    def test_manifest_round_trip(self, tmp_path):
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        rc = main(["simulate", "--ic", "single_mode", "--n-side", "64", "--dt", "0.01",
                   "--t-end", "0.05", "--c-existence", "0", "--out", str(out1),
                   "--seed", "11"])
        assert rc == 0
        rc = main(["simulate", "--config", str(out1 / "manifest.json"),
                   "--out", str(out2)])
        assert rc == 0
        for name in ("norms.csv", "theta_final.fld", "u_final.fld", "diagnostics.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


class TestOtherCommands:
    def test_norms_battery(self, tmp_path):
        rc = main(["norms", "--ic", "random", "--n-side", "64", "--out", str(tmp_path)])
        assert rc == 0
        text = (tmp_path / "norms.csv").read_text()
        assert "zygmund" in text and "sobolev" in text and "Hs_ul" in text

    def test_kernels_command(self, tmp_path):
        rc = main(["kernels", "--beta", "0.5", "--n-side", "128", "--box-length", "16",
                   "--no-fundamental", "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "near.fld").exists()
        report = (tmp_path / "kernel_report.csv").read_text()
        assert "c_beta" in report and "far_decay_exponent" in report

    def test_iterate_command(self, tmp_path):
        rc = main(["iterate", "--n-side", "128", "--box-length", "16", "--t-end", "0.04",
                   "--dt", "0.01", "--n-max", "3", "--out", str(tmp_path)])
        assert rc == 0
        dec = (tmp_path / "decrements.csv").read_text().splitlines()
        assert dec[0] == "n,t,D_n"
        assert len(dec) > 3

    def test_output_dir_env_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("OUTPUT_DIR", str(tmp_path / "envout"))
        rc = main(["verify", "--seed", "2"])
        assert rc == 0
        assert (tmp_path / "envout" / "manifest.json").exists()
