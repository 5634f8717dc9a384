"""
Tests for construction C norm bounds and the orthogonal-basis criterion.
"""

import math

import numpy as np
import pytest

from src.construction_c.bounds import (
    convergence_radius_c,
    creation_bound_c,
    lambda_operator_norm,
    norm_bounds_c,
    orthogonal_basis_check,
    r_prime_partial_sums_c,
    radius_constant_c,
    shifted_norm,
    wick_growth_c,
)
from src.construction_c.construction import ConstructionC, build_construction_c
from src.fock.space import FockContext, build_fock
from src.norms.estimates import reports_to_frame


@pytest.fixture
def poisson_two_fock(poisson_two_ctx) -> FockContext:
    return build_fock(poisson_two_ctx, N=3)


class TestConstants:
    """Test the operator norms entering the bounds."""

    @pytest.mark.unit
    def test_scalar_constants(self, scalar_construction: ConstructionC):
        """Test ||C + I|| = 3/2 and ||Lambda|| = 0 for C = 1/2."""
        assert shifted_norm(scalar_construction) == pytest.approx(1.5)
        assert lambda_operator_norm(scalar_construction) == 0
        assert creation_bound_c(scalar_construction) == pytest.approx(math.sqrt(1.5))
        assert radius_constant_c(scalar_construction) == pytest.approx(math.sqrt(1.5))
        assert convergence_radius_c(scalar_construction) == pytest.approx(1 / (4 * math.sqrt(1.5)))

    @pytest.mark.unit
    def test_diagonal_constants(self, diagonal_construction: ConstructionC):
        """Test the largest diagonal entry and the pointwise Lambda."""
        assert shifted_norm(diagonal_construction) == pytest.approx(1.5)
        assert lambda_operator_norm(diagonal_construction) == pytest.approx(1.0)
        assert radius_constant_c(diagonal_construction) == pytest.approx(math.sqrt(1.5))

    @pytest.mark.edge_case
    def test_creation_bound_floor(self):
        """Test the creation constant never drops below 1."""
        cc = build_construction_c({'h_dim': 1, 'C_diagonal': [['-1/2']]}, N=3)

        assert creation_bound_c(cc) == 1.0


class TestNormBounds:
    """Test norm_bounds_c."""

    @pytest.mark.integration
    def test_all_bounds_hold(self, scalar_construction: ConstructionC, diagonal_construction: ConstructionC):
        """Test every inequality holds on the fixtures."""
        for cc in (scalar_construction, diagonal_construction):
            reports = norm_bounds_c(cc)

            assert all(r.passed for r in reports)

    @pytest.mark.unit
    def test_creation_norm_is_sharp(self, scalar_construction: ConstructionC):
        """Test ||a+(e)|| reaches sqrt(3/2) on H = R."""
        reports = norm_bounds_c(scalar_construction)
        plus = next(r for r in reports if r.name == 'a_plus_c')

        assert plus.computed_norm == pytest.approx(math.sqrt(1.5), rel=1e-9)

    @pytest.mark.unit
    def test_frame_columns(self, diagonal_construction: ConstructionC):
        """Test the reports tabulate with element tags."""
        frame = reports_to_frame(norm_bounds_c(diagonal_construction, [diagonal_construction.element(['1', '1'])]))

        assert 'tag_element' in frame.columns
        assert set(frame['name']) == {'a_plus_c', 'a_minus_adjoint_c', 'a_zero_c', 'r_prime_partial_sums_c'}

    @pytest.mark.unit
    def test_partial_sums_empirical(self, scalar_construction: ConstructionC):
        """Test the R' partial sums stay under the r_n majorant inside the radius."""
        report = r_prime_partial_sums_c(scalar_construction, scalar_construction.basis(0))

        assert report.passed
        assert report.note == 'empirical'
        assert report.tags['radius'] == pytest.approx(convergence_radius_c(scalar_construction))

    @pytest.mark.edge_case
    def test_partial_sums_zero_vector(self, scalar_construction: ConstructionC):
        """Test a vanishing f is skipped."""
        report = r_prime_partial_sums_c(scalar_construction, scalar_construction.element(['0']))

        assert report.skipped
        assert report.passed

    @pytest.mark.unit
    def test_wick_growth(self, scalar_construction: ConstructionC):
        """Test the fitted Wick bound covers every degree."""
        reports = wick_growth_c(scalar_construction, scalar_construction.basis(0))

        assert [r.tags['degree'] for r in reports] == [1, 2, 3, 4]
        assert all(r.passed for r in reports)
        assert all(r.note == 'empirical' for r in reports)


class TestOrthogonalBasis:
    """Test the orthogonal-basis criterion."""

    @pytest.mark.unit
    def test_standard_basis_passes(self, diagonal_construction: ConstructionC):
        """Test a diagonal C keeps the standard tensor basis orthogonal."""
        identity = np.eye(2, dtype=int)
        result = orthogonal_basis_check(diagonal_construction, [identity, identity, identity])

        assert result
        assert result.witness is None
        assert result.levels == 3

    @pytest.mark.unit
    def test_rotated_basis_fails(self, diagonal_construction: ConstructionC):
        """Test a rotated top level breaks the eigen-tensor condition."""
        rotated = np.array([[1, 1], [1, -1]])
        result = orthogonal_basis_check(diagonal_construction, [np.eye(2, dtype=int), rotated])

        assert not result
        assert result.witness[0] == 'condition'
        assert result.to_dict()['passed'] is False

    @pytest.mark.unit
    def test_fock_context_criterion(self, poisson_two_fock: FockContext):
        """Test the gamma criterion on a commutative Fock space with gamma = 0."""
        identity = np.eye(2, dtype=int)
        result = orthogonal_basis_check(poisson_two_fock, [identity, identity])

        assert result.passed
