"""
Tests for deformed operator norms and the generator estimates.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from src.fock.operators import a_plus
from src.fock.space import build_fock
from src.norms.estimates import (
    NormReport, corollary_bound, creation_constant, cstar_constant, deformed_norm, element_norm,
    gamma_phi_norm, lambda_norm, pencil_norm, reports_to_frame, skipped_report, verify_estimates, x_norm_bound,
)
from src.norms.series import wick_norm_bounds
from src.utils.exceptions import KindMismatchError
from conftest import random_context


class TestNormReport:
    """Test NormReport bookkeeping."""

    @pytest.mark.unit
    def test_slack_and_pass(self):
        """Test computed <= bound passes with nonnegative slack."""
        report = NormReport('demo', 1.0, 1.5, tags={'degree': 2})

        assert report.slack == pytest.approx(0.5)
        assert report.passed
        assert report.to_dict()['tag_degree'] == 2

    @pytest.mark.unit
    def test_violation(self):
        """Test computed > bound fails beyond the slack tolerance."""
        assert not NormReport('demo', 2.0, 1.0).passed

    @pytest.mark.unit
    def test_skipped_passes(self):
        """Test skipped reports count as passed."""
        report = skipped_report('demo', 'not applicable')

        assert report.skipped
        assert report.passed
        assert math.isinf(report.bound)

    @pytest.mark.unit
    def test_frame(self):
        """Test reports collect into a table."""
        frame = reports_to_frame([NormReport('a', 1.0, 2.0), NormReport('b', 0.5, 0.5)])

        assert list(frame['name']) == ['a', 'b']
        assert frame['passed'].all()


class TestSpectralCore:
    """Test pencil norms and norms on B."""

    @pytest.mark.unit
    def test_pencil_scaling(self):
        """Test ||I|| between Gram I and Gram 4I is 2."""
        assert pencil_norm(np.eye(2), 4 * np.eye(2), np.eye(2)) == pytest.approx(2.0)

    @pytest.mark.unit
    def test_pencil_ignores_kernel(self):
        """Test directions in the source kernel are not measured."""
        source = np.diag([1.0, 0.0])

        assert pencil_norm(np.diag([1.0, 100.0]), np.eye(2), source) == pytest.approx(1.0)

    @pytest.mark.unit
    def test_commutative_element_norm(self, lenczewski_ctx):
        """Test ||b|| = max |b_i| on R^2."""
        assert element_norm(lenczewski_ctx, lenczewski_ctx.element(['2', '-3'])) == pytest.approx(3.0)

    @pytest.mark.unit
    def test_matrix_element_norm(self, matrix_poisson_ctx):
        """Test the matrix unit E_01 has norm 1."""
        assert element_norm(matrix_poisson_ctx, matrix_poisson_ctx.basis(1)) == pytest.approx(1.0)

    @pytest.mark.unit
    def test_scalar_constants(self, bozejko_ctx):
        """Test c = 1, ||gamma + phi|| = 3/2 and kappa = 3/2 for eta = 1/2."""
        assert cstar_constant(bozejko_ctx) == pytest.approx(1.0)
        assert gamma_phi_norm(bozejko_ctx) == pytest.approx(1.5)
        assert creation_constant(bozejko_ctx) == pytest.approx(1.5)
        assert lambda_norm(bozejko_ctx) == pytest.approx(1.0)

    @pytest.mark.unit
    def test_deformed_creation_norm(self, poisson_fock, poisson_ctx):
        """Test ||a+(1)|| = 1 when every level has norm one."""
        assert deformed_norm(poisson_fock, a_plus(poisson_fock, poisson_ctx.unit)) == pytest.approx(1.0)


class TestGeneratorEstimates:
    """Test the creation, annihilation and preservation inequalities."""

    @pytest.mark.integration
    def test_bozejko_estimates(self, bozejko_fock):
        """Test every estimate holds and the families are reported."""
        reports = verify_estimates(bozejko_fock)

        assert all(r.passed for r in reports)
        assert {r.name for r in reports} == {'a_plus', 'a_plus_map', 'a_minus_adjoint', 'a_zero'}

    @pytest.mark.integration
    def test_matrix_algebra_estimates(self, matrix_poisson_ctx):
        """Test non-commutative basis elements."""
        fc = build_fock(matrix_poisson_ctx, N=3)

        assert all(r.passed for r in verify_estimates(fc))

    @pytest.mark.unit
    def test_general_lambda_skips_preservation(self, ma_fock, ma_ctx):
        """Test a0 is only estimated for left multipliers."""
        reports = verify_estimates(ma_fock, [ma_ctx.unit])
        zero = [r for r in reports if r.name == 'a_zero']

        assert len(zero) == 1 and zero[0].skipped
        assert all(r.passed for r in reports)

    @pytest.mark.unit
    def test_x_norm(self, bozejko_fock, bozejko_ctx):
        """Test ||X(1)|| <= (2 sqrt(kappa) + ||Lambda||) ||1||."""
        assert x_norm_bound(bozejko_fock, bozejko_ctx.unit).passed

    @pytest.mark.edge_case
    def test_x_norm_general_lambda(self, ma_fock, ma_ctx):
        """Test the X bound needs a left multiplier."""
        with pytest.raises(KindMismatchError):
            x_norm_bound(ma_fock, ma_ctx.unit)

    @pytest.mark.integration
    def test_corollary(self, lenczewski_ctx):
        """Test the banded operator Y against its diagonal and closed-form bounds."""
        fc = build_fock(lenczewski_ctx, N=4)
        reports = corollary_bound(fc, [lenczewski_ctx.basis(0), lenczewski_ctx.basis(1), lenczewski_ctx.unit])

        assert [r.name for r in reports] == ['diagonal_bound', 'corollary_y']
        assert all(r.passed for r in reports)


@pytest.mark.slow
@pytest.mark.property
@settings(max_examples=20, deadline=None)
@given(ctx=random_context(lower=Fraction(-1, 2)))
def test_estimates_hold_on_random_contexts(ctx):
    """Test the generator, diagonal and Wick inequalities at N = 5."""
    fc = build_fock(ctx, N=5)
    family = [ctx.basis(i) for i in range(ctx.dim)] + [ctx.unit]
    reports = verify_estimates(fc) + corollary_bound(fc, family)
    if ctx.is_left_multiplier():
        reports.append(x_norm_bound(fc, ctx.unit))
        reports += [wick_norm_bounds(fc, family[:1] * n) for n in range(1, 4)]

    failed = [(r.name, r.slack) for r in reports if not r.passed]
    assert not failed
