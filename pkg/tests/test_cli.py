"""End-to-end tests of the command-line interface."""

import json
import re

import numpy as np
import pytest

from bilip import estimators as est
from bilip import maps as M
from bilip import pl
from bilip.cli import parse_config_file, parse_region, run_cli
from bilip.errors import ConfigError
from bilip.mapformat import save_map


def run(capsys, *args):
    code = run_cli(list(args))
    out = capsys.readouterr().out
    records = [json.loads(line) for line in out.strip().splitlines() if line]
    return code, records


class TestUsage:
    def test_no_args_is_usage_error(self, capsys):
        assert run_cli([]) == 2

    def test_unknown_subcommand(self, capsys):
        assert run_cli(["frobnicate"]) == 2

    def test_unknown_scenario(self, capsys):
        assert run_cli(["verify", "nonsense"]) == 2

    def test_missing_required_flag(self, capsys):
        assert run_cli(["estimate", "--region", "ball:0,0:1"]) == 2


class TestVerifyCommand:
    def test_spiral_scenario_passes(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        code, records = run(
            capsys, "verify", "spiral-bound", "--c", "1", "--n", "2",
            "--seed", "7", "--pairs", "20000", "--out", str(out),
        )
        assert code == 0
        assert records[0]["claimed"] == pytest.approx(3.0)
        assert records[0]["passed"] is True
        assert out.exists()

    def test_double_run_byte_identical_modulo_wall_time(self, capsys, tmp_path):
        args = ["verify", "radial-bound", "--beta", "0.5", "--n", "2",
                "--seed", "9", "--pairs", "10000"]
        code1 = run_cli(args)
        text1 = capsys.readouterr().out
        code2 = run_cli(args)
        text2 = capsys.readouterr().out
        assert code1 == code2 == 0
        strip = lambda t: re.sub(r'"wall_time_ms": [0-9.e+-]+', "", t)  # noqa: E731
        assert strip(text1) == strip(text2)

    def test_config_file_with_flag_override(self, capsys, tmp_path):
        cfgfile = tmp_path / "scenario.cfg"
        cfgfile.write_text(
            "# spiral scenario\nc = 2.0\nn = 2\nseed = 5\npairs = 10000\n"
        )
        code, records = run(
            capsys, "verify", "spiral-bound", "--config", str(cfgfile),
            "--c", "0.5",
        )
        assert code == 0
        # the flag wins: claimed = n*c + 1 = 2
        assert records[0]["claimed"] == pytest.approx(2.0)

    def test_failing_scenario_exits_one(self, capsys):
        code, records = run(
            capsys, "verify", "metric-equivalence", "--cloud", "circle",
            "--points", "8", "--eps", "0.8", "--pairs", "100", "--seed", "7",
        )
        # an octagon's corner-to-corner path is 2.5 percent short of pi
        assert code == 1
        assert records[0]["passed"] is False

    def test_drift_scenario_with_svg(self, capsys, tmp_path):
        svg = tmp_path / "drift.svg"
        code, records = run(
            capsys, "verify", "replication-drift", "--svg", str(svg),
        )
        assert code == 0
        assert svg.exists()
        assert svg.read_text().startswith("<svg")


class TestEstimateCommand:
    def test_identity_estimate(self, capsys, tmp_path):
        path = tmp_path / "id.map"
        save_map(M.identity(2), path)
        code, records = run(
            capsys, "estimate", "--map", str(path), "--region", "ball:0,0:10",
            "--pairs", "5000", "--seed", "3",
        )
        assert code == 0
        rec = records[0]
        assert rec["lambda_lower"] == 1.0
        assert rec["op"] == "estimate"
        assert rec["map"] == "identity(dim=2)"
        assert {"x", "y", "ratio"} <= set(rec["worst_pair"])

    def test_claim_violation_exits_one(self, capsys, tmp_path):
        path = tmp_path / "aff.map"
        save_map(M.affine([[3.0, 0.0], [0.0, 1.0]]), path)
        code, records = run(
            capsys, "estimate", "--map", str(path), "--region", "ball:0,0:10",
            "--pairs", "50000", "--seed", "3", "--claim", "2.0",
        )
        assert code == 1
        assert records[0]["violated"] is True

    def test_valid_claim_exits_zero(self, capsys, tmp_path):
        path = tmp_path / "aff.map"
        save_map(M.affine([[3.0, 0.0], [0.0, 1.0]]), path)
        code, records = run(
            capsys, "estimate", "--map", str(path), "--region", "ball:0,0:10",
            "--pairs", "50000", "--seed", "3", "--claim", "3.0",
        )
        assert code == 0
        assert records[0]["violated"] is False

    def test_missing_map_file(self, capsys):
        assert run_cli(["estimate", "--map", "/nonexistent.map",
                        "--region", "ball:0,0:1"]) == 2

    def test_histogram_svg(self, capsys, tmp_path):
        path = tmp_path / "id.map"
        svg = tmp_path / "h.svg"
        save_map(M.spiral_map(M.LogSpiralProfile(1.0, (0, 1), 2)), path)
        code, _ = run(
            capsys, "estimate", "--map", str(path), "--region",
            "annulus:0.001:100", "--pairs", "5000", "--svg", str(svg),
        )
        assert code == 0
        assert svg.read_text().startswith("<svg")


class TestDriftCommand:
    def test_replication_witnesses(self, capsys, tmp_path):
        path = tmp_path / "rep.map"
        save_map(M.disk_replication(M.make_twist_disk_map(dim=2)), path)
        code, records = run(
            capsys, "drift", "--map", str(path), "--witnesses", "replication",
            "-K", "40", "--expect", "exceeds",
        )
        assert code == 0
        assert records[0]["verdict"] == "exceeds-threshold-with-growth"
        drifts = records[0]["drifts"]
        np.testing.assert_allclose(np.array(drifts[1:]) / np.array(drifts[:-1]),
                                   2.0, rtol=1e-12)

    def test_psi_spelling_is_accepted(self, capsys, tmp_path):
        path = tmp_path / "rep.map"
        save_map(M.disk_replication(M.make_twist_disk_map(dim=2)), path)
        code, records = run(
            capsys, "drift", "--map", str(path), "--witnesses", "psi", "-K", "5",
        )
        assert code == 0
        assert records[0]["witness_kind"] == "replication"

    def test_spiral_witnesses_bounded_for_cutoff(self, capsys, tmp_path):
        from bilip.profiles import bump_profile

        path = tmp_path / "cut.map"
        save_map(
            M.spiral_map(M.CutoffRotationProfile(bump_profile(1.0, 1.0, 3.0),
                                                 (0, 1), 2)),
            path,
        )
        code, records = run(
            capsys, "drift", "--map", str(path), "--witnesses", "ray",
            "--x0", "1,0", "-K", "30", "--expect", "bounded",
        )
        assert code == 0
        assert records[0]["verdict"] == "bounded-below-threshold"

    def test_expect_mismatch_exits_one(self, capsys, tmp_path):
        path = tmp_path / "id.map"
        save_map(M.identity(2), path)
        code, _ = run(
            capsys, "drift", "--map", str(path), "--witnesses", "ray",
            "--x0", "1,0", "-K", "10", "--expect", "exceeds",
        )
        assert code == 1


class TestPlNormCommand:
    def test_norm_of_twist(self, capsys, tmp_path):
        f = pl.pl_twist_example(2, 6, 0.3)
        path = tmp_path / "twist.csv"
        pl.save_plmap_csv(f, path)
        code, records = run(capsys, "pl-norm", "--plmap", str(path))
        assert code == 0
        rec = records[0]
        assert rec["differential_norm"] == pytest.approx(
            pl.pl_differential_norm(f), rel=1e-12
        )
        assert rec["bilip_constant"] == pytest.approx(
            pl.pl_bilip_constant(f), rel=1e-12
        )


class TestGeodesicCommand:
    def test_circle_cloud(self, capsys, tmp_path):
        path = tmp_path / "circle.csv"
        est.save_cloud_csv(est.circle_cloud(2000), path)
        code, records = run(
            capsys, "geodesic", "--cloud", str(path), "--pairs", "500",
            "--eps", "0.05", "--pair", "0", "1000",
        )
        assert code == 0
        rec = records[0]
        assert rec["pair"]["graph_length"] == pytest.approx(np.pi, rel=0.01)
        assert rec["pair"]["chord"] == pytest.approx(2.0, rel=1e-9)

    def test_auto_eps(self, capsys, tmp_path):
        path = tmp_path / "circle.csv"
        est.save_cloud_csv(est.circle_cloud(500), path)
        code, records = run(capsys, "geodesic", "--cloud", str(path),
                            "--pairs", "100")
        assert code == 0
        assert records[0]["eps"] > 0


class TestConfigHelpers:
    def test_parse_config_file(self, tmp_path):
        path = tmp_path / "a.cfg"
        path.write_text("alpha = 1.5  # comment\n\n# full comment\nkind = twist\n")
        assert parse_config_file(path) == {"alpha": "1.5", "kind": "twist"}

    def test_bad_config_line(self, tmp_path):
        path = tmp_path / "b.cfg"
        path.write_text("not a key value pair\n")
        with pytest.raises(ConfigError):
            parse_config_file(path)

    def test_parse_region(self):
        r = parse_region("ball:1,2:3", 2)
        assert r.center == (1.0, 2.0) and r.radius == 3.0
        r = parse_region("box:0,0:1,2", 2)
        assert r.hi == (1.0, 2.0)
        r = parse_region("annulus:0.5:10", 2)
        assert r.inner == 0.5 and r.outer == 10.0
        with pytest.raises(ConfigError):
            parse_region("cube:1:2", 2)
        with pytest.raises(ConfigError):
            parse_region("ball:1,2", 2)

    def test_seed_env_override(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("BILIP_SEED", "123")
        code, records = run(capsys, "verify", "matrix-norms", "--pairs", "100")
        assert code == 0
        assert records[0]["seed"] == 123
