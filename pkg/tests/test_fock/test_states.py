"""
Tests for vacuum moments, adjoint relations and the null-space quotient.
"""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from src.algebra.examples import load_example
from src.cumulants.formulas import moment_partition_sum
from src.fock.operators import x_op
from src.fock.space import build_fock
from src.fock.states import (
    adjoint_residual, adjoint_residuals, kernel_preservation_residual, quotient_projector, vacuum_expectation,
)
from src.utils.exceptions import SizeLimitError
from src.utils.scalars import max_abs
from conftest import random_context, scalar_values


def _moments(fc, n_max=6):
    one = fc.ctx.unit
    return [vacuum_expectation(fc, [one] * n) for n in range(1, n_max + 1)]


class TestVacuumExpectation:
    """Test vacuum moments against known sequences."""

    @pytest.mark.unit
    @pytest.mark.calculation
    def test_poisson_moments(self, poisson_fock):
        """Test centered free Poisson moments 0, 1, 1, 3, 6, 15."""
        assert _moments(poisson_fock) == scalar_values([0, 1, 1, 3, 6, 15])

    @pytest.mark.unit
    @pytest.mark.calculation
    def test_bozejko_moments(self, bozejko_fock):
        """Test eta = 1/2, lambda = 1 moments."""
        assert _moments(bozejko_fock) == scalar_values([0, 1, 1, '7/2', '15/2', '43/2'])

    @pytest.mark.unit
    @pytest.mark.calculation
    def test_ma_moments(self, ma_fock):
        """Test MA with C = I has only even moments."""
        assert _moments(ma_fock) == scalar_values([0, 2, 0, 10, 0, 68])

    @pytest.mark.unit
    @pytest.mark.calculation
    def test_scalar_kernel_moments(self):
        """Test the one-cell Lenczewski kernel w = 1, lambda = 2."""
        fc = build_fock(load_example('lenczewski_discrete', {'w': [['1']], 'lam': ['2']}), N=6,
                        compute_gram=False)

        assert _moments(fc) == scalar_values([0, 1, 2, 7, 24, 89])

    @pytest.mark.unit
    def test_matrix_algebra_unit(self, matrix_poisson_fock):
        """Test X(1) over M_2 with the normalized trace is free Poisson."""
        assert _moments(matrix_poisson_fock, 4) == scalar_values([0, 1, 1, 3])

    @pytest.mark.unit
    def test_generator_descriptors(self, poisson_fock, poisson_ctx):
        """Test <a-(1) a+(1) Omega, Omega> = phi[1] and <a+ a- Omega, Omega> = 0."""
        one = poisson_ctx.unit

        assert vacuum_expectation(poisson_fock, [('minus', one), ('plus', one)]) == 1
        assert vacuum_expectation(poisson_fock, [('plus', one), ('minus', one)]) == 0

    @pytest.mark.unit
    def test_operator_matrix_descriptor(self, bozejko_fock, bozejko_ctx):
        """Test OperatorMatrix words agree with element words."""
        x = x_op(bozejko_fock, bozejko_ctx.unit)

        assert vacuum_expectation(bozejko_fock, [x, x, x, x]) == Fraction(7, 2)

    @pytest.mark.unit
    def test_float_mode(self):
        """Test float contexts reproduce the rational moment."""
        fc = build_fock(load_example('bozejko', {'eta': '1/2', 'lam': 1}, exact=False), N=4)

        assert vacuum_expectation(fc, [fc.ctx.unit] * 4) == pytest.approx(3.5)

    @pytest.mark.edge_case
    def test_word_longer_than_truncation(self, poisson_fock, poisson_ctx):
        """Test words beyond N are refused."""
        with pytest.raises(SizeLimitError):
            vacuum_expectation(poisson_fock, [poisson_ctx.unit] * 7)


class TestAdjointRelations:
    """Test <a+(b) x, y> = <x, a-(b*) y> and the preservation symmetry."""

    @pytest.mark.unit
    @pytest.mark.parametrize('fixture', ['bozejko_fock', 'lenczewski_fock', 'ma_fock'])
    def test_exact_adjointness(self, fixture, request):
        """Test both adjoint residuals vanish in rational mode."""
        fc = request.getfixturevalue(fixture)
        for i in range(fc.dim):
            residuals = adjoint_residuals(fc, fc.ctx.basis(i))
            assert residuals == {'creation': 0, 'preservation': 0}

    @pytest.mark.unit
    def test_non_selfadjoint_element(self, matrix_poisson_ctx):
        """Test a matrix unit E_01, whose adjoint is E_10."""
        fc = build_fock(matrix_poisson_ctx, N=3)

        assert adjoint_residual(fc, matrix_poisson_ctx.basis(1)) == 0


class TestQuotient:
    """Test the Gram null-space quotient."""

    @pytest.mark.unit
    def test_nondegenerate_projector_is_identity(self, bozejko_fock):
        """Test no kernel means the identity projector."""
        assert max_abs(quotient_projector(bozejko_fock, 2) - 1) == 0

    @pytest.mark.unit
    def test_degenerate_projector(self):
        """Test a fully null level projects to zero."""
        fc = build_fock(load_example('scalar_gamma', {'psi': -1}), N=4)

        assert max_abs(quotient_projector(fc, 2)) == 0
        assert quotient_projector(fc, 1)[0, 0] == 1

    @pytest.mark.integration
    def test_x_preserves_kernel(self):
        """Test X(1) maps null vectors to null vectors."""
        fc = build_fock(load_example('scalar_gamma', {'psi': -1, 'lam': 1}), N=4)

        assert kernel_preservation_residual(fc, x_op(fc, fc.ctx.unit)) == 0


@pytest.mark.slow
@pytest.mark.property
@settings(max_examples=10, deadline=None)
@given(ctx=random_context())
def test_moments_match_partition_sums(ctx):
    """Test operator moments equal the NC_ns partition sums for every basis word of length <= 6."""
    fc = build_fock(ctx, N=6, compute_gram=False)
    basis = [ctx.basis(i) for i in range(ctx.dim)]
    for n in range(1, 7):
        for word in product(range(ctx.dim), repeat=n):
            elements = [basis[i] for i in word]
            assert vacuum_expectation(fc, elements) == moment_partition_sum(fc, elements)
