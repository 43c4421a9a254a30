import numpy as np
import pytest

from igo_toolkit.contracts.errors import BracketingFailureError
from igo_toolkit.schemas.cycle import CycleSpec
from igo_toolkit.schemas.model import HillParams, IgoModel, PlantParams
from igo_toolkit.toolkit.cycle import (
    fixed_point,
    map_Q,
    map_residual,
    output_z0,
    propagate,
    solve_one_cycle,
)
from igo_toolkit.toolkit.matfun import B_VEC, expm_At
from igo_toolkit.toolkit.modulation import f_mod, phi


class TestFixedPoint:

    def test_reference_fixed_point(self, reference_plant, reference_spec):
        x = fixed_point(reference_plant, reference_spec)
        np.testing.assert_allclose(x, [0.0224565, 0.635643, 6.829481], rtol=1e-5)

    def test_fixed_point_is_invariant_under_propagation(self, rng, random_plant):
        for _ in range(200):
            plant = random_plant(rng)
            spec = CycleSpec(lam=rng.uniform(0.5, 10.0), period=rng.uniform(5.0, 100.0))
            x = fixed_point(plant, spec)
            assert np.all(x > 0)
            np.testing.assert_allclose(propagate(plant, x, spec.lam, spec.period), x, rtol=1e-9)

    def test_partial_fractions_agree_with_direct_solve(self, rng, random_plant):
        for _ in range(200):
            plant = random_plant(rng)
            spec = CycleSpec(lam=rng.uniform(0.5, 10.0), period=rng.uniform(5.0, 100.0))
            np.testing.assert_allclose(output_z0(plant, spec), fixed_point(plant, spec)[2], rtol=1e-8)

    def test_propagate(self, reference_plant):
        x = np.array([0.3, 0.2, 0.1])
        expected = expm_At(reference_plant, 12.0) @ (x + 2.5 * B_VEC)
        np.testing.assert_allclose(propagate(reference_plant, x, 2.5, 12.0), expected, rtol=1e-15)


class TestOneCycle:

    def test_designed_model_realizes_requested_cycle(self, fast_design):
        cycle = solve_one_cycle(fast_design.model)
        assert cycle.lam == pytest.approx(4.66, rel=1e-8)
        assert cycle.period == pytest.approx(66.75, rel=1e-8)
        assert cycle.z0 == cycle.x[2]
        assert cycle.residual < 1e-9
        np.testing.assert_allclose(map_Q(fast_design.model, np.asarray(cycle.x)), cycle.x, rtol=1e-8)

    def test_random_models_have_consistent_cycle(self, rng, random_plant):
        for _ in range(50):
            hill = HillParams(
                k1=rng.uniform(5.0, 20.0),
                k2=rng.uniform(2.0, 10.0),
                k3=rng.uniform(0.5, 5.0),
                k4=rng.uniform(0.5, 5.0),
                h_phi=rng.uniform(0.1, 10.0),
                p_phi=rng.uniform(1.0, 4.0),
                h_f=rng.uniform(0.1, 10.0),
                p_f=rng.uniform(1.0, 4.0),
            )
            model = IgoModel(plant=random_plant(rng), hill=hill)
            cycle = solve_one_cycle(model, scan=False)
            assert cycle.residual < 1e-7
            assert cycle.lam == pytest.approx(f_mod(hill, cycle.z0), rel=1e-9)
            assert cycle.period == pytest.approx(phi(hill, cycle.z0), rel=1e-9)
            assert hill.k3 < cycle.lam < hill.k3 + hill.k4
            assert hill.k1 < cycle.period < hill.k1 + hill.k2

    def test_residual_is_zero_only_at_fixed_point(self, fast_design):
        x = np.asarray(fast_design.cycle.x)
        assert map_residual(fast_design.model, x) < 1e-9
        assert map_residual(fast_design.model, 1.1 * x) > 1e-3

    def test_bracketing_failure(self):
        # выход при Φ ≈ Φ2 настолько мал, что z − RHS(z) положителен на обоих концах
        plant = PlantParams(a1=0.5, a2=0.6, a3=0.7, g1=1.0, g2=1.0)
        hill = HillParams(k1=1.0, k2=200.0, k3=1.0, k4=1.0, h_phi=1e-12, p_phi=2.0, h_f=1.0, p_f=2.0)
        with pytest.raises(BracketingFailureError) as err:
            solve_one_cycle(IgoModel(plant=plant, hill=hill))
        assert err.value.step == "solve_one_cycle"
        assert err.value.lower < err.value.upper
