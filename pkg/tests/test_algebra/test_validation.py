"""
Tests for the standing-hypothesis checks on (B, phi, gamma, Lambda).
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from src.algebra.context import AlgebraContext, commutative_algebra
from src.algebra.examples import load_example
from src.algebra.validation import (
    associativity_residual, check_cp_level, check_non_degeneracy, eq23_residuals,
    star_residuals, validate_algebra,
)
from src.utils.scalars import zeros
from conftest import random_context


class TestValidateAlgebra:
    """Test validate_algebra on good and bad contexts."""

    @pytest.mark.unit
    @pytest.mark.validation
    @pytest.mark.parametrize("name,params", [
        ('poisson', {}),
        ('bozejko', {'eta': '1/2', 'lam': 1}),
        ('scalar_gamma', {'psi': 1, 'lam': 1}),
        ('lenczewski_discrete', {'w': [['1/2', '-1/2'], ['1', '0']], 'lam': ['1', '-1']}),
        ('lenczewski_kesten', {'m': 3, 'p': '1/2', 'q': '-1/2'}),
        ('ma', {'C': [['1', '0'], ['0', '1']]}),
    ])
    def test_examples_pass(self, name, params):
        """Test every example with admissible parameters validates."""
        report = validate_algebra(load_example(name, params, validate=False))

        assert report.passed, [c.name for c in report.failures()]

    @pytest.mark.unit
    @pytest.mark.validation
    def test_matrix_poisson_passes(self, matrix_poisson_ctx):
        """Test the M_2 free Poisson context validates."""
        assert validate_algebra(matrix_poisson_ctx).passed

    @pytest.mark.validation
    def test_phi_zero_fails_faithfulness(self):
        """Test phi = 0 names the faithfulness failure."""
        structure = commutative_algebra([1])
        structure['phi'] = zeros(1, True)
        ctx = AlgebraContext(dim=1, gamma=zeros((1, 1), True), lam=zeros((1, 1, 1), True), **structure)
        report = validate_algebra(ctx)

        assert not report.passed
        assert not report.get('phi_positive_faithful').passed

    @pytest.mark.validation
    def test_asymmetric_lambda_fails(self, ma_asymmetric_ctx):
        """Test a non-symmetric B-tensor fails the Lambda symmetry conditions."""
        report = validate_algebra(ma_asymmetric_ctx)

        assert not report.get('lambda_symmetry_phi').passed
        phi_res, _ = eq23_residuals(ma_asymmetric_ctx)
        assert phi_res == 1.0

    @pytest.mark.validation
    def test_non_associative_detected(self):
        """Test a broken structure tensor is reported."""
        structure = commutative_algebra([1, 1])
        mul = structure['mul'].copy()
        mul[0, 1, 0] = Fraction(1)
        structure['mul'] = mul
        ctx = AlgebraContext(dim=2, gamma=zeros((2, 2), True), lam=zeros((2, 2, 2), True), **structure)

        assert associativity_residual(ctx) > 0
        assert not validate_algebra(ctx).get('associativity').passed

    @pytest.mark.unit
    def test_star_residuals_vanish(self, matrix_poisson_ctx):
        """Test the transpose star is an involutive anti-automorphism."""
        assert all(value == 0.0 for value in star_residuals(matrix_poisson_ctx).values())

    @pytest.mark.unit
    def test_report_frame(self, poisson_ctx):
        """Test to_frame has one row per check."""
        report = validate_algebra(poisson_ctx)
        frame = report.to_frame()

        assert len(frame) == len(report.checks)
        assert set(frame.columns) >= {'check', 'residual', 'passed'}
        assert report.to_dict()['passed'] is True


class TestCompletePositivity:
    """Test check_cp_level and non-degeneracy."""

    @pytest.mark.unit
    def test_negative_map_fails_level_one(self):
        """Test gamma + phi/2 with psi = -0.8 is not positive."""
        ctx = load_example('scalar_gamma', {'psi': -0.8})

        assert not check_cp_level(ctx, ctx.gamma_plus_phi(0.5), 1).passed
        assert check_cp_level(ctx, ctx.gamma_plus_phi(1), 1).passed

    @pytest.mark.unit
    def test_witness_reported(self):
        """Test the failing tuple is reported with the unit as -1."""
        ctx = load_example('scalar_gamma', {'psi': -0.8})
        certificate = check_cp_level(ctx, ctx.gamma_plus_phi(0.5), 2)

        assert certificate.min_eigenvalue < 0
        assert len(certificate.witness) == 2
        assert set(certificate.witness) <= {0, -1}

    @pytest.mark.edge_case
    def test_level_zero_rejected(self, poisson_ctx):
        """Test matrix level must be positive."""
        with pytest.raises(ValueError):
            check_cp_level(poisson_ctx, poisson_ctx.gamma_plus_phi(), 0)

    @pytest.mark.validation
    def test_non_degeneracy(self):
        """Test SC(-1, .) is degenerate while SC(0, .) is not."""
        assert not check_non_degeneracy(load_example('scalar_gamma', {'psi': -1})).passed
        assert check_non_degeneracy(load_example('scalar_gamma', {'psi': 0})).passed

    @pytest.mark.validation
    def test_matrix_cp_level(self, matrix_poisson_ctx):
        """Test phi(.)1 on M_2 is completely positive up to level 2."""
        ctx = matrix_poisson_ctx

        assert check_cp_level(ctx, ctx.gamma_plus_phi(), 2).passed


@pytest.mark.property
@settings(max_examples=20, deadline=None)
@given(ctx=random_context(), t=st.fractions(min_value=-1, max_value=1, max_denominator=4))
def test_cp_levels_are_monotone(ctx, t):
    """Test passing at level n implies passing at every lower level, n <= 3."""
    certificates = [check_cp_level(ctx, ctx.gamma_plus_phi(t), n) for n in (1, 2, 3)]

    for lower, higher in zip(certificates, certificates[1:]):
        assert lower.passed or not higher.passed
        assert higher.min_eigenvalue <= lower.min_eigenvalue + 1e-12
