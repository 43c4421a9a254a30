import csv
import json

import pytest
from click.testing import CliRunner

from igo_toolkit.cli import cli, main

PLANT = {"a1": 0.08, "a2": 0.15, "a3": 0.12, "g1": 2.0, "g2": 0.5}
SPEC = {"lambda": 4.66, "T": 66.75}
SWEEP_BASE = {"a1": 0.08, "a2": 0.15, "g1": 2.0, "g2": 0.5, "k1": 60, "k2": 40, "k3": 3, "k4": 2, "p": 2}


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _design_payload(out, **options):
    return {
        "command": "design",
        "plant": dict(PLANT),
        "spec": SPEC,
        "options": {"k2": 40.0, "k4": 2.0, "slopes": {"f_prime": -0.1143, "phi_prime": 0.22852}, **options},
        "out": str(out),
    }


def _sweep_payload(out, period=66.7502, a3=(0.23, 0.26), n_points=7):
    return {
        "command": "sweep",
        "sweep": {
            "kind": "a3",
            "base": SWEEP_BASE,
            "spec": {"lambda": 4.66, "T": period},
            "a3_min": a3[0],
            "a3_max": a3[1],
            "n_points": n_points,
        },
        "workers": 2,
        "out": str(out),
    }


class TestDesignCommand:

    def test_writes_report(self, runner, tmp_path, write_config):
        path = write_config(_design_payload(tmp_path / "out"))
        result = runner.invoke(cli, ["design", "--config", str(path)])
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "out" / "design_report.json").read_text(encoding="utf-8"))
        assert report["stabilized"] is True
        assert report["model"]["hill"]["k1"] == pytest.approx(65.953, rel=1e-4)
        assert "r0 = " in result.output

    def test_out_flag_overrides_config(self, runner, tmp_path, write_config):
        path = write_config(_design_payload(tmp_path / "out"))
        result = runner.invoke(cli, ["design", "--config", str(path), "--out", str(tmp_path / "other")])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "other" / "design_report.json").exists()
        assert not (tmp_path / "out").exists()

    def test_unstable_slopes_exit_with_domain_code(self, runner, tmp_path, write_config):
        payload = _design_payload(tmp_path / "out")
        payload["options"]["slopes"] = {"f_prime": -0.1143, "phi_prime": 2.2852}
        result = runner.invoke(cli, ["design", "--config", str(write_config(payload))])
        assert result.exit_code == 2

    def test_design_without_stabilization_warns(self, runner, tmp_path, write_config):
        payload = _design_payload(
            tmp_path / "out", k1=60.0, k3=3.0, root="smaller_h", require_stable=False
        )
        payload["options"]["slopes"] = {"f_prime": -0.1143, "phi_prime": 2.2852}
        result = runner.invoke(cli, ["design", "--config", str(write_config(payload))])
        assert result.exit_code == 0, result.output
        assert "ПРЕДУПРЕЖДЕНИЕ" in result.output


class TestSimulateCommand:

    def test_simulate_from_design_report(self, runner, tmp_path, write_config):
        design_cfg = write_config(_design_payload(tmp_path / "out"), "design.json")
        assert runner.invoke(cli, ["design", "--config", str(design_cfg)]).exit_code == 0

        sim_cfg = write_config(
            {
                "command": "simulate",
                "design_report": "out/design_report.json",
                "start": {"scale": 0.9},
                "n_impulses": 60,
                "dt": 5.0,
                "out": str(tmp_path / "sim"),
            },
            "simulate.json",
        )
        result = runner.invoke(cli, ["simulate", "--config", str(sim_cfg)])
        assert result.exit_code == 0, result.output
        with (tmp_path / "sim" / "events.csv").open(newline="", encoding="utf-8") as fh:
            events = list(csv.reader(fh))
        assert len(events) == 61
        assert (tmp_path / "sim" / "trajectory.csv").exists()
        assert "период аттрактора: 1" in result.output

    def test_missing_report(self, runner, tmp_path, write_config):
        sim_cfg = write_config({"command": "simulate", "design_report": "nowhere.json", "out": str(tmp_path)})
        result = runner.invoke(cli, ["simulate", "--config", str(sim_cfg)])
        assert result.exit_code == 1


class TestSweepCommand:

    def test_a3_sweep(self, runner, tmp_path, write_config):
        result = runner.invoke(cli, ["sweep", "--config", str(write_config(_sweep_payload(tmp_path / "sw")))])
        assert result.exit_code == 0, result.output
        points = json.loads((tmp_path / "sw" / "bifurcations.json").read_text(encoding="utf-8"))
        assert [p["kind"] for p in points] == ["period_doubling"]
        assert 0.24 < points[0]["param"] < 0.25
        with (tmp_path / "sw" / "sweep.csv").open(newline="", encoding="utf-8") as fh:
            assert len(list(csv.reader(fh))) == 8

    def test_every_point_failing_is_a_domain_error(self, runner, tmp_path, write_config):
        path = write_config(_sweep_payload(tmp_path / "sw", period=50.0, a3=(0.2, 0.3), n_points=4))
        result = runner.invoke(cli, ["sweep", "--config", str(path)])
        assert result.exit_code == 2
        assert (tmp_path / "sw" / "sweep.csv").exists()


class TestCheckCommand:

    def test_check_without_config(self, runner):
        result = runner.invoke(cli, ["check"])
        assert result.exit_code == 0, result.output
        assert "mismatch" in result.output
        assert "match" in result.output

    def test_check_writes_table(self, runner, tmp_path):
        result = runner.invoke(cli, ["check", "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "audit.csv").exists()


class TestExitCodes:

    def test_config_for_other_command(self, runner, tmp_path, write_config):
        path = write_config(_design_payload(tmp_path / "out"))
        result = runner.invoke(cli, ["simulate", "--config", str(path)])
        assert result.exit_code == 1

    def test_malformed_json(self, runner, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        assert runner.invoke(cli, ["design", "--config", str(path)]).exit_code == 1

    def test_schema_violation(self, runner, tmp_path, write_config):
        payload = _design_payload(tmp_path / "out")
        payload["plant"]["a1"] = -1.0
        assert runner.invoke(cli, ["design", "--config", str(write_config(payload))]).exit_code == 1

    def test_main_usage_error(self):
        assert main(["--bogus"]) == 1
        assert main(["design"]) == 1

    def test_main_return_codes(self, tmp_path, write_config):
        assert main(["check"]) == 0
        path = write_config(_sweep_payload(tmp_path / "sw", period=50.0, a3=(0.2, 0.3), n_points=3))
        assert main(["sweep", "--config", str(path)]) == 2
