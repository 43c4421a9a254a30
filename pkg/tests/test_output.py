import csv
import json
import math
import sys

import numpy as np
import pytest
from pydantic import TypeAdapter

from igo_toolkit.contracts.errors import ConfigError
from igo_toolkit.schemas.bifurcation import BifurcationPoint, SweepRecord
from igo_toolkit.schemas.model import IgoModel
from igo_toolkit.toolkit import output
from igo_toolkit.toolkit.audit import run_audit
from igo_toolkit.toolkit.sim import dense_trajectory, simulate_impulses


def _read_csv(path):
    with path.open(newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


class TestFormatting:

    @pytest.mark.parametrize(
        ("value", "text"),
        [
            (None, ""),
            (True, "true"),
            (False, "false"),
            (3, "3"),
            (0.1, "0.10000000000000001"),
            (math.inf, "inf"),
            ("period_doubling", "period_doubling"),
        ],
    )
    def test_fmt(self, value, text):
        assert output.fmt(value) == text

    def test_float_text_round_trips_exactly(self, rng):
        for v in rng.normal(size=100):
            assert float(output.fmt(float(v))) == float(v)


class TestCsv:

    def test_events_and_trajectory(self, tmp_path, fast_design):
        x0 = 0.9 * np.asarray(fast_design.cycle.x)
        events = simulate_impulses(fast_design.model, x0, 5)
        samples = dense_trajectory(fast_design.model, x0, 100.0, 5.0)
        ev = _read_csv(output.write_events(tmp_path / "events.csv", events))
        tr = _read_csv(output.write_trajectory(tmp_path / "trajectory.csv", samples))
        assert tuple(ev[0]) == output.EVENT_COLUMNS
        assert tuple(tr[0]) == output.TRAJECTORY_COLUMNS
        assert len(ev) == 6
        assert len(tr) == len(samples) + 1
        assert float(ev[2][1]) == events[1].t
        assert float(ev[2][2]) == events[1].lam

    def test_sweep_rows(self, tmp_path):
        records = [
            SweepRecord(
                param=0.2, h=4.0, z0=6.0, multipliers=(complex(-0.5, 0.0), complex(0.1, 0.2), complex(0.1, -0.2)),
                r0=0.5, tau=1.4426950408889634, is_schur=True,
            ),
            SweepRecord(param=0.15, error="degenerate_nodes"),
        ]
        rows = _read_csv(output.write_sweep(tmp_path / "sweep.csv", records))
        assert tuple(rows[0]) == output.SWEEP_COLUMNS
        ok, bad = rows[1], rows[2]
        assert ok[3:9] == ["-0.5", "0", "0.10000000000000001", "0.20000000000000001",
                           "0.10000000000000001", "-0.20000000000000001"]
        assert ok[11] == "true"
        assert ok[12] == ""
        assert bad[0] == "0.14999999999999999"
        assert bad[1:12] == [""] * 11
        assert bad[12] == "degenerate_nodes"

    def test_audit_table(self, tmp_path):
        audit = run_audit()
        rows = _read_csv(output.write_audit(tmp_path / "nested" / "audit.csv", audit))
        assert tuple(rows[0]) == output.AUDIT_COLUMNS
        assert len(rows) == len(audit) + 1
        assert {r[5] for r in rows[1:]} == {"match", "mismatch"}

    def test_files_are_reproducible(self, tmp_path, slow_design):
        x0 = 0.7 * np.asarray(slow_design.cycle.x)
        a = output.write_events(tmp_path / "a.csv", simulate_impulses(slow_design.model, x0, 20))
        b = output.write_events(tmp_path / "b.csv", simulate_impulses(slow_design.model, x0, 20))
        assert a.read_bytes() == b.read_bytes()


class TestJson:

    def test_design_report_keys(self, tmp_path, fast_design):
        payload = json.loads(output.write_design_report(tmp_path / "design_report.json", fast_design).read_text())
        assert set(payload["cycle"]) >= {"X", "lambda", "T", "z0", "residual"}
        assert payload["cycle"]["lambda"] == pytest.approx(4.66)
        assert {"M", "Lambda", "multipliers", "r0", "tau", "is_schur"} <= set(payload["stability"])
        for rho in payload["stability"]["multipliers"]:
            assert len(rho) == 2
        assert payload["stabilized"] is True
        model = TypeAdapter(IgoModel).validate_python(payload["model"])
        assert model == fast_design.model

    def test_bifurcations(self, tmp_path):
        point = BifurcationPoint(
            lower=0.248, upper=0.249, param=0.2485, multiplier=complex(-1.0, 0.0), kind="period_doubling", refined=True
        )
        payload = json.loads(output.write_bifurcations(tmp_path / "bifurcations.json", [point]).read_text())
        assert payload == [
            {"lower": 0.248, "upper": 0.249, "param": 0.2485, "multiplier": [-1.0, 0.0],
             "kind": "period_doubling", "refined": True}
        ]


class TestPlots:

    def test_missing_matplotlib(self, tmp_path, monkeypatch):
        monkeypatch.setitem(sys.modules, "matplotlib", None)
        with pytest.raises(ConfigError) as err:
            output.plot_weights(tmp_path / "w.svg", [])
        assert err.value.step == "plots"

    def test_svg_files(self, tmp_path, fast_design):
        pytest.importorskip("matplotlib")
        x0 = 0.9 * np.asarray(fast_design.cycle.x)
        events = simulate_impulses(fast_design.model, x0, 10)
        samples = dense_trajectory(fast_design.model, x0, 300.0, 2.0)
        records = [SweepRecord(param=p, r0=0.5 + p) for p in (0.1, 0.3, 0.6)]
        paths = [
            output.plot_phase(tmp_path / "phase.svg", samples),
            output.plot_weights(tmp_path / "lambda.svg", events, fast_design.cycle.lam),
            output.plot_sweep(tmp_path / "sweep.svg", records),
        ]
        for path in paths:
            assert path.read_text(encoding="utf-8").lstrip().startswith("<?xml")

    def test_svg_is_deterministic(self, tmp_path, fast_design):
        pytest.importorskip("matplotlib")
        events = simulate_impulses(fast_design.model, np.asarray(fast_design.cycle.x), 10)
        a = output.plot_weights(tmp_path / "a.svg", events, 4.66)
        b = output.plot_weights(tmp_path / "b.svg", events, 4.66)
        assert a.read_bytes() == b.read_bytes()
