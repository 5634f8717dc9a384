"""
Tests for the involution S, right operators and the extended Wick map.
"""

import pytest
from src.fock.space import build_fock
from src.trace.involution import (
    commutator_residuals, interacting_w_map, s_involution, s_matrix, s_residuals, w_adjoint_residual, x_r,
)
from src.utils.exceptions import SizeLimitError


@pytest.fixture
def poisson_two_fock(poisson_two_ctx):
    return build_fock(poisson_two_ctx, N=4)


class TestInvolution:
    """Test S(u_1 (x) ... (x) u_n) = u_n* (x) ... (x) u_1*."""

    @pytest.mark.unit
    def test_reverses_words(self, poisson_two_fock):
        """Test e_0 (x) e_1 -> e_1 (x) e_0."""
        column = s_involution(poisson_two_fock).block(2, 2)[:, 1]

        assert list(column) == [0, 0, 1, 0]

    @pytest.mark.unit
    def test_vacuum_fixed(self, poisson_two_fock):
        """Test S Omega = Omega."""
        assert s_matrix(poisson_two_fock, 0)[0, 0] == 1

    @pytest.mark.unit
    def test_star_applied(self, matrix_poisson_ctx):
        """Test S(E_01) = E_10 on level one."""
        fc = build_fock(matrix_poisson_ctx, N=2)

        assert list(s_matrix(fc, 1)[:, 1]) == [0, 0, 1, 0]

    @pytest.mark.unit
    def test_square_and_isometry(self, poisson_two_fock):
        """Test S^2 = I and <S x, S y> = <y, x> for a tracial phi."""
        assert s_residuals(poisson_two_fock) == {'square': 0, 'isometry': 0}


class TestRightOperators:
    """Test X_r(b) and commutators."""

    @pytest.mark.unit
    def test_right_creation_on_vacuum(self, poisson_two_fock, poisson_two_ctx):
        """Test X_r(b) Omega = b."""
        b = poisson_two_ctx.element(['1', '3'])
        column = x_r(poisson_two_fock, b).vacuum_column()

        assert list(column[1]) == [1, 3]

    @pytest.mark.integration
    def test_commutators_vanish(self, poisson_two_fock):
        """Test [X(e_i), X_r(e_j)] = 0 on levels 0..2."""
        residuals = commutator_residuals(poisson_two_fock, [0, 1, 2])

        assert residuals == {0: 0, 1: 0, 2: 0}

    @pytest.mark.unit
    def test_commutator_levels_beyond_truncation(self, poisson_two_fock):
        """Test levels without an exact block are skipped."""
        assert 3 not in commutator_residuals(poisson_two_fock, [3])


class TestWickMap:
    """Test W(xi) for Fock vectors."""

    @pytest.mark.unit
    def test_vacuum_image(self, poisson_two_fock):
        """Test W(xi) Omega = xi."""
        xi = poisson_two_fock.word_vector((0, 1)) * 2 + poisson_two_fock.word_vector((1, 1))
        image = interacting_w_map(poisson_two_fock, xi, 2).vacuum_column()

        assert list(image[2]) == list(xi)

    @pytest.mark.integration
    def test_adjoint_on_vacuum(self, poisson_two_fock, bozejko_fock):
        """Test W(xi)* Omega = S(xi)."""
        xi = poisson_two_fock.word_vector((0, 1)) + poisson_two_fock.word_vector((1, 0)) * 3

        assert w_adjoint_residual(poisson_two_fock, xi, 2) == 0
        assert w_adjoint_residual(bozejko_fock, bozejko_fock.word_vector((0, 0, 0)), 3) == 0

    @pytest.mark.edge_case
    def test_level_needs_headroom(self, poisson_two_fock):
        """Test level > N - 1 is refused."""
        with pytest.raises(SizeLimitError):
            interacting_w_map(poisson_two_fock, poisson_two_fock.word_vector((0, 0, 0, 0)), 4)
