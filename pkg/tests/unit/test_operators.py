# -*- coding: utf-8 -*-
import numpy as np
import pytest

from noisy_emergence.domain.errors import DomainError
from noisy_emergence.domain.models.coupling import CouplingMatrix, HypothesisCheck, KernelKind, KernelSpec
from noisy_emergence.domain.models.system import SystemParams, SystemVariant
from noisy_emergence.domain.services.operators import (
    adjacency,
    coercivity,
    laplacian,
    operator_norm_on_quotient,
    s_operator,
    verify_operator_hypotheses,
)
from tests.factories import complete_kernel, flocking_params, random_state


def _positions(k=6, d=2, seed=0):
    return np.random.default_rng(seed).uniform(-1, 1, size=(k, d))


class TestKernel:

    def test_cucker_smale_forms(self):
        plain = KernelSpec(KernelKind.CUCKER_SMALE, 2.0, 0.5)
        squared = KernelSpec(KernelKind.CUCKER_SMALE_SQUARED, 2.0, 0.5)
        assert float(plain(3.0)) == pytest.approx(1.0)
        assert float(squared(3.0)) == pytest.approx(2.0 / np.sqrt(10.0))

    def test_table_kernel_interpolates(self):
        table = KernelSpec(KernelKind.TABLE, 1.0, table=((0.0, 1.0), (2.0, 0.0)))
        assert float(table(1.0)) == pytest.approx(0.5)
        assert float(table(5.0)) == pytest.approx(0.0)

    def test_increasing_table_is_rejected(self):
        with pytest.raises(DomainError):
            KernelSpec(KernelKind.TABLE, 1.0, table=((0.0, 0.5), (1.0, 1.0)))

    def test_non_positive_scale_is_rejected(self):
        with pytest.raises(DomainError):
            KernelSpec(KernelKind.CUCKER_SMALE, 0.0, 1.0)


class TestMatrices:

    def test_adjacency_is_symmetric_with_zero_diagonal(self):
        A = adjacency(_positions(), KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 0.5))
        np.testing.assert_allclose(A.values, A.values.T)
        np.testing.assert_allclose(np.diag(A.values), 0.0)
        assert np.all(A.values > 0)

    def test_laplacian_rows_sum_to_zero(self):
        L = laplacian(adjacency(_positions(), KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 0.5)))
        np.testing.assert_allclose(L.values.sum(axis=1), 0.0, atol=1e-12)
        assert L.is_laplacian

    def test_non_square_matrix_is_rejected(self):
        with pytest.raises(DomainError):
            CouplingMatrix(np.zeros((2, 3)))

    def test_laplacian_flag_requires_zero_row_sums(self):
        with pytest.raises(DomainError):
            CouplingMatrix(np.eye(3), is_laplacian=True)

    def test_negative_step_is_rejected(self):
        L = laplacian(adjacency(_positions(), complete_kernel()))
        with pytest.raises(ValueError):
            s_operator(L, -0.1)


class TestSpectralQuantities:

    def test_complete_graph(self):
        k, h = 7, 0.05
        L = laplacian(adjacency(_positions(k), complete_kernel()))
        assert float(coercivity(L)) == pytest.approx(k, rel=1e-10)
        assert operator_norm_on_quotient(s_operator(L, h)) == pytest.approx(1 - h * k, rel=1e-10)

    def test_coercivity_is_the_fiedler_value(self):
        L = laplacian(adjacency(_positions(8, 3, seed=4), KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 1.5)))
        expected = np.linalg.eigvalsh(L.values)[1]
        assert float(coercivity(L)) == pytest.approx(expected, rel=1e-9)

    def test_operator_norm_ignores_the_diagonal_direction(self):
        L = laplacian(adjacency(_positions(5), KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 1.0)))
        S = s_operator(L, 0.1)
        eigenvalues = np.linalg.eigvalsh(S.values)
        # El autovalor 1 de la dirección (1, …, 1) no cuenta
        expected = np.max(np.abs(np.sort(eigenvalues)[:-1]))
        assert operator_norm_on_quotient(S) == pytest.approx(expected, rel=1e-9)

    def test_asymmetric_operator_is_symmetrized(self):
        values = np.array([[1.0, -1.0, 0.0], [-0.5, 1.0, -0.5], [0.0, -2.0, 2.0]])
        result = coercivity(CouplingMatrix(values, symmetric=False))
        assert result.symmetrized


class TestHypotheses:

    def test_flocking_contraction_holds_at_random_states(self):
        k = 10
        params = flocking_params(k)
        for seed in range(5):
            report = verify_operator_hypotheses(random_state(k, 2, seed=seed), params)
            assert report.passed
            assert report.checks[0].name == "contraction_S"

    def test_excessive_coupling_fails_contraction(self):
        params = SystemParams(variant=SystemVariant.I_D, coupling=1000.0, beta=0.5, h=0.05,
                              kernel=KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 0.5))
        report = verify_operator_hypotheses(random_state(10, 2), params)
        assert not report.passed
        assert report.worst_slack < 0

    def test_continuous_coercivity_with_complete_weights(self):
        k = 6
        params = SystemParams(variant=SystemVariant.I_C, coupling=float(k), beta=0.0,
                              kernel=complete_kernel(continuous=True))
        report = verify_operator_hypotheses(random_state(k, 2), params)
        assert report.passed
        assert report.checks[0].lhs == pytest.approx(k, rel=1e-10)

    def test_coupled_systems_report_two_checks(self):
        k = 5
        params = SystemParams(variant=SystemVariant.II_D, coupling_1=5.0, coupling_2=5.0, h_1=0.1, h_2=0.1,
                              kernel_x=complete_kernel(), kernel_y=complete_kernel())
        report = verify_operator_hypotheses(random_state(k, 2, y_scale=0.5), params)
        assert [check.name for check in report.checks] == ["contraction_S1", "contraction_S2"]
        assert report.passed

    def test_strict_and_tolerant_relations(self):
        assert HypothesisCheck.evaluate("eq", 0.5, '<=', 0.5 - 1e-12, tolerance=1e-9).passed
        assert not HypothesisCheck.evaluate("eq", 0.5, '<', 0.5).passed
        assert HypothesisCheck.evaluate("ge", 2.0, '>=', 1.0).slack == pytest.approx(1.0)
