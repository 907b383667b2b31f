import json
import os

from mobiusflat.cli import main

FAST_VERIFY = "checks = trace_identities,principal_multiplicity\nsamples = 4\n"


def write_cfg(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return str(path)


class TestVerifyCommand:
    def test_pass_exit_zero(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_VERIFY)
        out = tmp_path / "out"
        assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["summary"]["all_asserts_pass"] is True
        assert {c["name"] for c in report["checks"]} == {
            "trace_identities",
            "principal_multiplicity",
        }
        assert (out / "report.md").exists() and (out / "checks.csv").exists()

    def test_failing_check_exit_one(self, tmp_path):
        cfg = write_cfg(tmp_path, "checks = trace_identities\nsamples = 4\ntol_trace = 1e-30\n")
        assert main(["verify", "--config", cfg, "--out", str(tmp_path / "o")]) == 1

    def test_empty_check_set(self, tmp_path):
        cfg = write_cfg(tmp_path, "checks =\n")
        out = tmp_path / "out"
        assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["checks"] == []

    def test_byte_identical_reports(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_VERIFY + "seed = 11\n")
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["verify", "--config", cfg, "--out", str(a)]) == 0
        assert main(["verify", "--config", cfg, "--out", str(b)]) == 0
        assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()

    def test_seed_override_changes_hash(self, tmp_path):
        cfg = write_cfg(tmp_path, FAST_VERIFY)
        a, b = tmp_path / "a", tmp_path / "b"
        main(["verify", "--config", cfg, "--out", str(a), "--seed", "1"])
        main(["verify", "--config", cfg, "--out", str(b), "--seed", "2"])
        ra = json.loads((a / "report.json").read_text())
        rb = json.loads((b / "report.json").read_text())
        assert ra["environment"]["config_hash"] != rb["environment"]["config_hash"]


class TestConfigErrors:
    def test_zero_tolerance_exit_two(self, tmp_path):
        cfg = write_cfg(tmp_path, "tol_constancy = 0\n")
        assert main(["verify", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_unknown_key_exit_two(self, tmp_path):
        cfg = write_cfg(tmp_path, "zzz = 7\n")
        assert main(["verify", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_missing_file_exit_two(self, tmp_path):
        assert main(["verify", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path)]) == 2


class TestDataCommands:
    def test_spiral_csv(self, tmp_path):
        cfg = write_cfg(tmp_path, "s_max = 1.0\n")
        assert main(["spiral", "--config", cfg, "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "trajectory.csv").read_text().splitlines()
        assert lines[0].startswith("#") and "epsilon=-1" in lines[0]
        assert lines[1].split(",")[:3] == ["s", "kappa", "kappa_s"]
        assert len(lines) > 100

    def test_build_obj_and_descriptor(self, tmp_path):
        cfg = write_cfg(tmp_path, "family = torus\nslice_res = 8\n")
        assert main(["build", "--config", cfg, "--out", str(tmp_path)]) == 0
        obj = (tmp_path / "torus.obj").read_text().splitlines()
        assert sum(1 for ln in obj if ln.startswith("v ")) == 64
        assert sum(1 for ln in obj if ln.startswith("f ")) == 49
        desc = json.loads((tmp_path / "torus.json").read_text())
        assert desc["resolution"] == 8
        assert len(desc["ambient_projection_axes"]) == 3

    def test_invariants_csv(self, tmp_path):
        cfg = write_cfg(tmp_path, "family = torus\nsamples = 3\n")
        assert main(
            ["invariants", "--config", cfg, "--out", str(tmp_path), "--convention", "half"]
        ) == 0
        lines = (tmp_path / "invariants.csv").read_text().splitlines()
        assert "convention=half" in lines[0]
        assert len(lines) == 2 + 3

    def test_rigidity_small(self, tmp_path):
        cfg = write_cfg(tmp_path, "horizon = 30\ngrid_size = 2\n")
        assert main(["rigidity", "--config", cfg, "--out", str(tmp_path)]) == 0
        result = json.loads((tmp_path / "rigidity.json").read_text())
        assert result["status"] == "pass"
        assert os.path.exists(tmp_path / "rigidity_grid.csv")
