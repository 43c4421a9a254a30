import itertools
import math

import numpy as np
import pytest

from igo_toolkit.contracts.errors import DegenerateNodesError
from igo_toolkit.toolkit.matfun import (
    B_VEC,
    dd1,
    dd2,
    dd2_lagrange,
    exp_dd1,
    exp_dd2,
    expm_At,
    expm_series,
    mu,
    mu_At,
    nu,
    opitz_apply,
    plant_matrix,
)


class TestDividedDifferences:

    def test_exp_dd1_known_value(self):
        np.testing.assert_allclose(exp_dd1(0.0, math.log(2.0)), 1.0 / math.log(2.0), rtol=1e-14)

    def test_exp_dd2_reference_nodes(self):
        np.testing.assert_allclose(exp_dd2(-5.34, -10.0125, -8.01), 3.270947e-4, rtol=1e-6)

    def test_exp_dd1_close_nodes(self):
        z, h = -3.7, 1e-7
        np.testing.assert_allclose(exp_dd1(z, z + h), math.exp(z) * math.expm1(h) / h, rtol=1e-12)

    def test_nodes_inside_separation_threshold_rejected(self):
        # порог 1e-9·max(1, |z|) = 3.7e-9
        with pytest.raises(DegenerateNodesError):
            exp_dd1(-3.7, -3.7 + 1e-10)

    def test_dd2_forms_agree(self, rng):
        for _ in range(200):
            z = rng.uniform(-5.0, 5.0, size=3)
            if np.min(np.abs(np.subtract.outer(z, z))[np.triu_indices(3, 1)]) < 0.1:
                continue
            np.testing.assert_allclose(dd2(math.sin, *z), dd2_lagrange(math.sin, *z), rtol=1e-8, atol=1e-12)

    def test_permutation_symmetry(self, rng):
        for _ in range(100):
            z = rng.uniform(-20.0, 0.0, size=3)
            ref2 = exp_dd2(*z)
            for perm in itertools.permutations(z):
                np.testing.assert_allclose(exp_dd2(*perm), ref2, rtol=1e-12)
                np.testing.assert_allclose(dd2(math.exp, *perm), ref2, rtol=1e-6)
            np.testing.assert_allclose(exp_dd1(z[0], z[1]), exp_dd1(z[1], z[0]), rtol=1e-15)

    def test_exp_differences_positive(self, rng):
        for _ in range(200):
            z = rng.uniform(-60.0, 0.0, size=3)
            assert exp_dd1(z[0], z[1]) > 0
            assert exp_dd2(*z) > 0

    def test_coincident_nodes_rejected(self):
        with pytest.raises(DegenerateNodesError):
            dd1(math.exp, 1.0, 1.0)
        with pytest.raises(DegenerateNodesError):
            exp_dd2(-1.0, -2.0, -1.0)


class TestMuNu:

    def test_mu_value(self):
        np.testing.assert_allclose(mu(-5.34), 0.0048190, rtol=1e-3)

    def test_mu_identity(self, rng):
        z = rng.uniform(-10.0, -0.1, size=50)
        np.testing.assert_allclose(mu(z), np.exp(z) / (1.0 - np.exp(z)), rtol=1e-12)

    def test_mu_at_zero_rejected(self):
        with pytest.raises(DegenerateNodesError):
            mu(0.0)

    def test_mu_scalar_returns_float(self):
        assert isinstance(mu(-1.0), float)
        assert isinstance(nu(-1.0), float)

    def test_nu_values_and_shape(self):
        np.testing.assert_allclose(nu(-1.0), -0.581977, rtol=1e-5)
        np.testing.assert_allclose(nu(-2.0), -0.313035, rtol=1e-5)
        z = np.linspace(-10.0, -0.01, 400)
        v = nu(z)
        assert np.all(v < 0)
        # убывает и строго вогнута на отрицательной полуоси
        assert np.all(np.diff(v) < 0)
        assert np.all(np.diff(v, 2) < 0)
        assert nu(-1.0) < nu(-2.0)


class TestMatrixFunctions:

    def test_opitz_exp_matches_closed_form(self, reference_plant):
        np.testing.assert_allclose(opitz_apply(math.exp, reference_plant), expm_At(reference_plant, 1.0), rtol=1e-7)

    def test_reference_diagonal(self, reference_plant):
        e = expm_At(reference_plant, 66.75)
        np.testing.assert_allclose(np.diag(e), [4.7959e-3, 4.4836e-5, 3.3212e-4], rtol=1e-4)
        np.testing.assert_allclose(np.trace(e), 0.005173, rtol=1e-3)
        assert np.all(np.triu(e, 1) == 0)

    def test_identity_at_zero(self, reference_plant):
        np.testing.assert_array_equal(expm_At(reference_plant, 0.0), np.eye(3))

    def test_closed_form_matches_series(self, rng, random_plant):
        for _ in range(1000):
            plant = random_plant(rng)
            t = rng.uniform(0.0, 100.0)
            closed = expm_At(plant, t)
            series = expm_series(plant_matrix(plant) * t)
            np.testing.assert_allclose(closed, series, rtol=1e-10, atol=0)

    def test_semigroup(self, reference_plant):
        np.testing.assert_allclose(
            expm_At(reference_plant, 30.0) @ expm_At(reference_plant, 12.5),
            expm_At(reference_plant, 42.5),
            rtol=1e-12,
        )

    def test_semigroup_random_times(self, rng, random_plant):
        for _ in range(500):
            plant = random_plant(rng)
            s, t = rng.uniform(0.1, 20.0, size=2)
            np.testing.assert_allclose(expm_At(plant, s) @ expm_At(plant, t), expm_At(plant, s + t), rtol=1e-9)

    def test_nonnegative_for_positive_time(self, rng, random_plant):
        for _ in range(200):
            assert np.all(expm_At(random_plant(rng), rng.uniform(0.0, 100.0)) >= 0)

    def test_mu_at_first_column_solves_linear_system(self, reference_plant):
        t, lam = 66.75, 4.66
        direct = np.linalg.solve(expm_At(reference_plant, -t) - np.eye(3), lam * B_VEC)
        np.testing.assert_allclose(lam * mu_At(reference_plant, t)[:, 0], direct, rtol=1e-10)
