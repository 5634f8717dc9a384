"""
Tests for growth sequences, Wick bounds and convergence radii.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from src.algebra.examples import load_example
from src.fock.space import build_fock
from src.norms.series import (
    alpha_closed_form, alpha_sequence, catalan, convergence_constant, convergence_radius, matricial_gf_bound,
    r_prime_partial_sums, r_sequence, wick_constant, wick_norm_bounds, wick_series_bound,
)
from src.norms.estimates import verify_estimates
from src.utils.exceptions import KindMismatchError


class TestSequences:
    """Test the integer sequences behind the bounds."""

    @pytest.mark.unit
    @pytest.mark.calculation
    def test_alpha(self):
        """Test alpha = 0, 1, 2, 5, 12, 29."""
        assert alpha_sequence(5) == [0, 1, 2, 5, 12, 29]

    @pytest.mark.unit
    def test_alpha_closed_form(self):
        """Test the closed form reproduces the recursion."""
        for j, value in enumerate(alpha_sequence(12)):
            assert alpha_closed_form(j) == pytest.approx(value)

    @pytest.mark.unit
    @pytest.mark.calculation
    def test_r(self):
        """Test r = 1, 1, 2, 4, 9, 21."""
        assert r_sequence(5) == [1, 1, 2, 4, 9, 21]

    @pytest.mark.property
    @given(n=st.integers(min_value=0, max_value=25))
    def test_r_below_catalan(self, n):
        """Test r_n <= Catalan(n)."""
        assert r_sequence(n)[n] <= catalan(n)

    @pytest.mark.unit
    def test_catalan(self):
        """Test the first Catalan numbers."""
        assert [catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]


class TestRadius:
    """Test the convergence constant and radius."""

    @pytest.mark.unit
    def test_radius(self):
        """Test eta = 1/4, lambda = 0 gives K' = 1/2 and radius 1/2."""
        fc = build_fock(load_example('bozejko', {'eta': '1/4', 'lam': 0}), N=4)

        assert convergence_constant(fc) == pytest.approx(0.5)
        assert convergence_radius(fc) == pytest.approx(0.5)

    @pytest.mark.edge_case
    def test_infinite_radius(self, semicircle_ctx):
        """Test gamma = 0, Lambda = 0 has no singularity."""
        fc = build_fock(semicircle_ctx, N=4)

        assert math.isinf(convergence_radius(fc))

    @pytest.mark.integration
    def test_partial_sums(self, bozejko_fock, bozejko_ctx):
        """Test sum ||R'_n(u)|| stays below the r_n majorant inside the radius."""
        report = r_prime_partial_sums(bozejko_fock, bozejko_ctx.unit, max_degree=8)

        assert report.passed
        assert report.note == 'empirical'

    @pytest.mark.edge_case
    def test_partial_sums_zero_element(self, bozejko_fock, bozejko_ctx):
        """Test a vanishing u is skipped."""
        assert r_prime_partial_sums(bozejko_fock, bozejko_ctx.zero()).skipped


class TestWickBounds:
    """Test Wick polynomial norm bounds."""

    @pytest.mark.unit
    def test_wick_constant(self, bozejko_fock):
        """Test K = 2 + ||Lambda|| / sqrt(kappa) + 1 / (2 kappa)."""
        assert wick_constant(bozejko_fock) == pytest.approx(2 + 1 / math.sqrt(1.5) + 1 / 3)

    @pytest.mark.integration
    @pytest.mark.parametrize('n', [1, 2, 3, 4])
    def test_wick_norm(self, bozejko_fock, bozejko_ctx, n):
        """Test ||W(1, ..., 1)|| against alpha_n kappa^(n/2) K."""
        assert wick_norm_bounds(bozejko_fock, [bozejko_ctx.unit] * n).passed

    @pytest.mark.edge_case
    def test_general_lambda(self, ma_fock, ma_ctx):
        """Test Wick bounds need a left multiplier."""
        with pytest.raises(KindMismatchError):
            wick_norm_bounds(ma_fock, [ma_ctx.unit])

    @pytest.mark.integration
    def test_series_inside_region(self, bozejko_fock, bozejko_ctx):
        """Test a small u gives a convergent bound."""
        report = wick_series_bound(bozejko_fock, bozejko_ctx.unit * Fraction(1, 4), max_degree=4)

        assert not report.skipped
        assert report.passed

    @pytest.mark.edge_case
    def test_series_outside_region(self, bozejko_fock, bozejko_ctx):
        """Test a large u is skipped."""
        assert wick_series_bound(bozejko_fock, bozejko_ctx.unit, max_degree=4).skipped

    @pytest.mark.integration
    def test_matricial_bound(self, bozejko_fock, bozejko_ctx):
        """Test sum of sup |R_n| = 7/2 against the bound 4."""
        report = matricial_gf_bound(bozejko_fock, [bozejko_ctx.unit] * 4)

        assert report.computed_norm == pytest.approx(3.5)
        assert report.bound == pytest.approx(4.0)
        assert report.passed


@pytest.mark.slow
@pytest.mark.property
@settings(max_examples=15, deadline=None)
@given(eta=st.fractions(min_value=0, max_value=2, max_denominator=4),
       lam=st.fractions(min_value=-2, max_value=2, max_denominator=4))
def test_creation_estimates_hold_for_bozejko(eta, lam):
    """Test the generator estimates across scalar Bozejko parameters."""
    fc = build_fock(load_example('bozejko', {'eta': str(eta), 'lam': str(lam)}), N=4)

    assert all(r.passed for r in verify_estimates(fc))
