"""
Tests for Wick polynomials and the resolvent identity.
"""

from fractions import Fraction
from itertools import product

import pytest
from src.algebra.examples import load_example
from src.fock.operators import identity_op, x_op
from src.fock.space import build_fock
from src.wick import polynomials
from src.wick.polynomials import (
    b_element_residual, clear_cache, pseudo_orthogonality, resolvent_element, resolvent_residual, vacuum_residual,
    wick_poly,
)
from src.utils.exceptions import SingularElementError, SizeLimitError


class TestWickPolynomial:
    """Test W(u_1..u_n) Omega = u_1 (x) ... (x) u_n."""

    @pytest.mark.unit
    def test_low_degrees(self, bozejko_fock, bozejko_ctx):
        """Test W() = I and W(u) = X(u)."""
        one = bozejko_ctx.unit

        assert wick_poly(bozejko_fock, []).residual(identity_op(bozejko_fock)) == 0
        assert wick_poly(bozejko_fock, [one]).residual(x_op(bozejko_fock, one)) == 0

    @pytest.mark.unit
    def test_semicircle_square(self, semicircle_ctx):
        """Test W(1, 1) = X^2 - 1 creates 1 (x) 1 from the vacuum."""
        fc = build_fock(semicircle_ctx, N=4)
        column = wick_poly(fc, [fc.ctx.unit] * 2).vacuum_column()

        assert list(column[2]) == [1]
        assert list(column.get(0, [0])) == [0]

    @pytest.mark.integration
    def test_vacuum_images_mixed_words(self, lenczewski_fock, lenczewski_ctx):
        """Test every word of length <= 4 over e_0, e_1."""
        for n in range(1, 5):
            for word in product(range(2), repeat=n):
                assert vacuum_residual(lenczewski_fock, [lenczewski_ctx.basis(i) for i in word]) == 0

    @pytest.mark.integration
    def test_general_lambda(self, ma_fock, ma_ctx):
        """Test a general-kind context with a non-unit word."""
        word = [ma_ctx.basis(0), ma_ctx.unit, ma_ctx.basis(1)]

        assert vacuum_residual(ma_fock, word) == 0

    @pytest.mark.unit
    def test_memoized_per_space(self, poisson_fock, poisson_ctx):
        """Test repeated requests return the cached operator until cleared."""
        first = wick_poly(poisson_fock, [poisson_ctx.unit] * 3)

        assert wick_poly(poisson_fock, [poisson_ctx.unit] * 3) is first
        clear_cache(poisson_fock)
        assert wick_poly(poisson_fock, [poisson_ctx.unit] * 3) is not first

    @pytest.mark.edge_case
    def test_degree_needs_headroom(self, poisson_fock, poisson_ctx):
        """Test n > N - 1 is refused."""
        with pytest.raises(SizeLimitError):
            wick_poly(poisson_fock, [poisson_ctx.unit] * 6)


class TestPseudoOrthogonality:
    """Test inner products of Wick vectors."""

    @pytest.mark.unit
    def test_different_lengths_vanish(self, bozejko_fock, bozejko_ctx):
        """Test <W(1) Omega, W(1, 1) Omega> = 0."""
        one = bozejko_ctx.unit

        assert pseudo_orthogonality(bozejko_fock, [one], [one, one]) == 0

    @pytest.mark.unit
    def test_same_length_is_gram(self, bozejko_fock, bozejko_ctx):
        """Test <W(1, 1) Omega, W(1, 1) Omega> = 1 + eta."""
        one = bozejko_ctx.unit

        assert pseudo_orthogonality(bozejko_fock, [one, one], [one, one]) == Fraction(3, 2)


class TestResolvent:
    """Test b(u) and the degree-wise resolvent identity."""

    @pytest.mark.unit
    @pytest.mark.calculation
    def test_bozejko_element(self, bozejko_fock, bozejko_ctx):
        """Test b(1) = 1 + lambda + (1 + eta) = 7/2."""
        assert list(resolvent_element(bozejko_fock, bozejko_ctx.unit)) == [Fraction(7, 2)]

    @pytest.mark.unit
    @pytest.mark.calculation
    def test_general_lambda_element(self, ma_fock, ma_ctx):
        """Test b(1) for MA with gamma = I and phi[1] = 2."""
        assert list(resolvent_element(ma_fock, ma_ctx.unit)) == [4, 4]

    @pytest.mark.edge_case
    def test_singular_element(self, ma_fock, ma_ctx):
        """Test a non-invertible u with a general Lambda."""
        with pytest.raises(SingularElementError):
            resolvent_element(ma_fock, ma_ctx.basis(0))

    @pytest.mark.integration
    def test_identity_holds(self, bozejko_fock, bozejko_ctx):
        """Test degrees 1..4 pass and the tail is only reported."""
        report = resolvent_residual(bozejko_fock, bozejko_ctx.unit, max_degree=4)

        assert report.passed
        assert sorted(report.residuals['resolvent']) == [1, 2, 3, 4]
        assert report.details['b'] == ['7/2']
        assert set(report.tail.get('resolvent', {})) <= {5, 6}

    @pytest.mark.integration
    def test_identity_two_cells(self, lenczewski_fock, lenczewski_ctx):
        """Test a non-scalar element on the two-cell kernel."""
        report = resolvent_residual(lenczewski_fock, lenczewski_ctx.element(['1', '1/3']), max_degree=3)

        assert report.passed

    @pytest.mark.edge_case
    def test_degree_needs_headroom(self, poisson_fock, poisson_ctx):
        """Test max_degree > N - 1 is refused."""
        with pytest.raises(SizeLimitError):
            resolvent_residual(poisson_fock, poisson_ctx.unit, max_degree=6)


@pytest.fixture
def ma_interacting_fock():
    """MA on R^2 with gamma = I and the pointwise Lambda(e_i (x) e_i) = e_i (general kind)."""
    b = [[['1', '0'], ['0', '0']], [['0', '0'], ['0', '1']]]
    ctx = load_example('ma', {'C': [['1', '0'], ['0', '1']], 'B': b}, validate=False)
    return build_fock(ctx, N=5)


class TestResolventUsesElement:
    """Test the resolvent identity is evaluated with the computed b(u)."""

    @pytest.mark.unit
    @pytest.mark.calculation
    def test_element_relation(self, ma_interacting_fock):
        """Test b(u) u = u + Lambda(u (x) u) + (gamma + phi)[u^2] u for an invertible u."""
        u = ma_interacting_fock.ctx.element(['2', '1'])
        b = resolvent_element(ma_interacting_fock, u)

        assert b_element_residual(ma_interacting_fock, u, b) == 0

    @pytest.mark.integration
    def test_identity_holds_with_general_lambda(self, ma_interacting_fock):
        """Test every judged degree passes with a general Lambda."""
        u = ma_interacting_fock.ctx.element(['2', '1'])
        report = resolvent_residual(ma_interacting_fock, u, max_degree=3)

        assert report.passed
        assert report.residuals['b_element'][0] == 0

    @pytest.mark.integration
    def test_wrong_element_fails(self, ma_interacting_fock, monkeypatch):
        """Test a wrong b(u) is caught by the element relation and by the identity."""
        ctx = ma_interacting_fock.ctx
        u = ctx.element(['2', '1'])
        monkeypatch.setattr(polynomials, 'resolvent_element', lambda fc, v: ctx.element(['12345', '-999']))

        report = resolvent_residual(ma_interacting_fock, u, max_degree=3)

        assert not report.passed
        assert report.residuals['b_element'][0] > 0
        assert max(report.residuals['resolvent'].values()) > 0
        assert report.details['b'] == ['12345', '-999']
