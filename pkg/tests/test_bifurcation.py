import cmath

import pytest

from igo_toolkit.contracts.errors import ErrorCode, InfeasibleError
from igo_toolkit.schemas.bifurcation import SweepRecord
from igo_toolkit.schemas.cycle import CycleSpec
from igo_toolkit.schemas.model import PlantParams
from igo_toolkit.toolkit.bifurcation import (
    a3_evaluator,
    all_failed,
    detect_crossings,
    evaluate_a3,
    slope_evaluator,
    solve_h_for,
    sweep_a3,
    sweep_slopes,
)
from igo_toolkit.toolkit.cycle import output_z0
from igo_toolkit.toolkit.executors import SequentialExecutor, ThreadPoolSweepExecutor
from igo_toolkit.toolkit.modulation import phi


def _rec(param: float, *rho: complex) -> SweepRecord:
    roots = tuple(complex(r) for r in rho)
    return SweepRecord(param=param, multipliers=roots, r0=max(abs(r) for r in roots))


class TestCalibrationAlongSweep:

    def test_common_half_point_hits_period(self, sweep_base, sweep_spec):
        for a3 in (0.2, 0.3, 0.45):
            h, z0 = solve_h_for(a3, sweep_base, sweep_spec)
            assert z0 == pytest.approx(output_z0(sweep_base.plant(a3), sweep_spec))
            assert phi(sweep_base.hill(h), z0) == pytest.approx(sweep_spec.period, rel=1e-12)

    def test_period_outside_modulation_range(self, sweep_base):
        with pytest.raises(InfeasibleError):
            solve_h_for(0.3, sweep_base, CycleSpec(lam=4.66, period=50.0))
        with pytest.raises(InfeasibleError):
            solve_h_for(0.3, sweep_base, CycleSpec(lam=10.0, period=66.75))

    def test_degenerate_point_becomes_error_record(self, sweep_base, sweep_spec):
        # a3 = a2 = 0.15
        rec = evaluate_a3(0.15, sweep_base, sweep_spec)
        assert rec.multipliers is None
        assert rec.error == ErrorCode.DEGENERATE_NODES.value


class TestSweeps:

    def test_a3_sweep_finds_period_doubling(self, sweep_base, sweep_spec):
        records = sweep_a3(sweep_base, sweep_spec, (0.23, 0.26), 7)
        assert [r.param for r in records] == pytest.approx([0.23, 0.235, 0.24, 0.245, 0.25, 0.255, 0.26])
        assert all(r.error is None for r in records)

        coarse = detect_crossings(records)
        assert [p.kind for p in coarse] == ["period_doubling"]
        assert not coarse[0].refined

        points = detect_crossings(records, a3_evaluator(sweep_base, sweep_spec))
        assert len(points) == 1
        pd = points[0]
        assert pd.kind == "period_doubling"
        assert pd.refined
        assert 0.24 < pd.param < 0.25
        assert pd.upper - pd.lower <= 2e-7 + 1e-15
        assert abs(pd.multiplier + 1.0) < 1e-5

    def test_full_a3_range_has_single_period_doubling(self, sweep_base, sweep_spec):
        with ThreadPoolSweepExecutor(max_workers=4) as pool:
            records = sweep_a3(sweep_base, sweep_spec, (0.1505, 0.54), 200, pool)
        assert len(records) == 200
        assert not all_failed(records)

        points = detect_crossings(records, a3_evaluator(sweep_base, sweep_spec))
        doublings = [p for p in points if p.kind == "period_doubling"]
        assert len(doublings) == 1
        assert 0.24 < doublings[0].param < 0.25
        assert abs(doublings[0].multiplier + 1.0) < 1e-5

    def test_sweep_is_independent_of_workers(self, sweep_base, sweep_spec):
        seq = sweep_a3(sweep_base, sweep_spec, (0.14, 0.3), 17, SequentialExecutor())
        with ThreadPoolSweepExecutor(max_workers=4) as pool:
            par = sweep_a3(sweep_base, sweep_spec, (0.14, 0.3), 17, pool)
        assert par == seq

    def test_slope_sweep_finds_period_doubling(self):
        plant = PlantParams(a1=0.08, a2=0.15, a3=0.3005, g1=2.0, g2=0.5)
        spec = CycleSpec(lam=4.6625, period=66.7502)
        records = sweep_slopes(plant, spec, (-0.6, 0.0), 40.0, 2.0, 121)
        assert all(r.h is None for r in records)
        points = detect_crossings(records, slope_evaluator(plant, spec, 40.0, 2.0))
        assert "period_doubling" in [p.kind for p in points]

    def test_slope_sweep_below_doubling_point(self):
        plant = PlantParams(a1=0.08, a2=0.15, a3=0.2505, g1=2.0, g2=0.5)
        spec = CycleSpec(lam=4.6625, period=66.7502)
        records = sweep_slopes(plant, spec, (-0.6, 0.0), 40.0, 2.0, 61)
        assert all(r.multipliers is not None for r in records)
        assert [r.param for r in records] == sorted(r.param for r in records)

    def test_all_failed(self, sweep_base):
        records = sweep_a3(sweep_base, CycleSpec(lam=4.66, period=50.0), (0.2, 0.3), 5)
        assert all_failed(records)
        assert {r.error for r in records} == {ErrorCode.INFEASIBLE.value}
        assert detect_crossings(records) == []


class TestDetectCrossings:

    def test_period_doubling(self):
        points = detect_crossings([_rec(0.0, -0.9, 0.1, 0.0), _rec(1.0, -1.1, 0.1, 0.0)])
        assert len(points) == 1
        assert points[0].kind == "period_doubling"
        assert points[0].param == pytest.approx(0.5)
        assert (points[0].lower, points[0].upper) == (0.0, 1.0)

    def test_fold(self):
        points = detect_crossings([_rec(0.0, 0.8, 0.1, 0.0), _rec(2.0, 1.2, 0.1, 0.0)])
        assert [p.kind for p in points] == ["fold"]
        assert points[0].param == pytest.approx(1.0)

    def test_neimark_sacker(self):
        lo, hi = 0.95 * cmath.exp(1j), 1.05 * cmath.exp(1j)
        points = detect_crossings([_rec(0.0, lo, lo.conjugate(), 0.2), _rec(1.0, hi, hi.conjugate(), 0.2)])
        assert [p.kind for p in points] == ["neimark_sacker"]
        assert points[0].param == pytest.approx(0.5)

    def test_error_records_are_skipped(self):
        records = [
            _rec(0.0, -0.9, 0.1, 0.0),
            SweepRecord(param=0.5, error=ErrorCode.DEGENERATE_NODES.value),
            _rec(1.0, -1.1, 0.1, 0.0),
        ]
        points = detect_crossings(records)
        assert [p.kind for p in points] == ["period_doubling"]
        assert points[0].lower == 0.0
        assert points[0].upper == 1.0

    def test_no_crossing_inside_unit_circle(self):
        assert detect_crossings([_rec(0.0, 0.5, 0.1, 0.0), _rec(1.0, 0.6, -0.2, 0.0)]) == []
