"""
Shared pytest fixtures for nnfock tests.

Provides reusable algebra contexts, Fock spaces and tolerances across all
test modules.
"""

import json
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from src.algebra.context import AlgebraContext, commutative_algebra, matrix_algebra
from src.algebra.examples import load_example
from src.config.config import NumericConfig
from src.construction_c.construction import ConstructionC, build_construction_c
from src.fock.space import FockContext, build_fock
from src.utils.scalars import zeros


# ============================================================================
# Scalar Contexts (d = 1)
# ============================================================================

@pytest.fixture
def poisson_ctx() -> AlgebraContext:
    """Centered free Poisson: gamma = 0, Lambda = multiplication."""
    return load_example('poisson')


@pytest.fixture
def bozejko_ctx() -> AlgebraContext:
    """Bozejko deformation with eta = 1/2, lambda = 1."""
    return load_example('bozejko', {'eta': '1/2', 'lam': 1})


@pytest.fixture
def semicircle_ctx() -> AlgebraContext:
    """gamma = 0, Lambda = 0: the standard semicircle."""
    return load_example('scalar_gamma', {'psi': 0, 'lam': 0})


def sc_context(t, lam) -> AlgebraContext:
    """SC(t, lambda): gamma = t phi, Lambda(1 (x) 1) = lambda, on B = C."""
    return load_example('scalar_gamma', {'psi': t, 'lam': lam})


@pytest.fixture
def sc_factory():
    """Factory for SC(t, lambda) contexts."""
    return sc_context


# ============================================================================
# Commutative Contexts (B = R^m)
# ============================================================================

@pytest.fixture
def lenczewski_ctx() -> AlgebraContext:
    """Two-cell Lenczewski kernel with a pointwise lambda."""
    return load_example('lenczewski_discrete', {'w': [['1/2', '-1/2'], ['1', '0']], 'lam': ['1', '-1']})


@pytest.fixture
def bozejko_vector_ctx() -> AlgebraContext:
    """Bozejko data on R^2 with non-uniform weights."""
    return load_example('bozejko', {'eta': ['1/2', '1'], 'lam': ['1', '2'], 'weights': ['1/3', '2/3']})


@pytest.fixture
def poisson_two_ctx() -> AlgebraContext:
    """Free Poisson on R^2 with uniform weights."""
    return load_example('poisson', {'m': 2})


@pytest.fixture
def ma_ctx() -> AlgebraContext:
    """Example MA with gamma = identity and Lambda = 0."""
    return load_example('ma', {'C': [['1', '0'], ['0', '1']]})


@pytest.fixture
def ma_asymmetric_ctx() -> AlgebraContext:
    """Example MA whose B-tensor only has Lambda(e_0 (x) e_1) = e_0 (unvalidated)."""
    b = [[['0', '0'], ['1', '0']], [['0', '0'], ['0', '0']]]
    return load_example('ma', {'C': [['0', '0'], ['0', '0']], 'B': b}, validate=False)


# ============================================================================
# Matrix Algebra Contexts
# ============================================================================

@pytest.fixture
def matrix_poisson_ctx() -> AlgebraContext:
    """M_2 with the normalized trace, gamma = 0, Lambda(u (x) v) = uv."""
    structure = matrix_algebra(2)
    return AlgebraContext(dim=4, gamma=zeros((4, 4), True), lam=structure['mul'].copy(),
                          lambda_kind='left-multiplier', name='matrix_poisson', **structure)


@pytest.fixture
def matrix_semicircle_ctx() -> AlgebraContext:
    """M_2 with gamma = 0 and Lambda = 0 (operator-valued semicircle over the trace)."""
    structure = matrix_algebra(2)
    return AlgebraContext(dim=4, gamma=zeros((4, 4), True), lam=zeros((4, 4, 4), True),
                          lambda_kind='left-multiplier', name='matrix_semicircle', **structure)


# ============================================================================
# Fock Spaces
# ============================================================================

@pytest.fixture
def poisson_fock(poisson_ctx: AlgebraContext) -> FockContext:
    return build_fock(poisson_ctx, N=6)


@pytest.fixture
def bozejko_fock(bozejko_ctx: AlgebraContext) -> FockContext:
    return build_fock(bozejko_ctx, N=6)


@pytest.fixture
def lenczewski_fock(lenczewski_ctx: AlgebraContext) -> FockContext:
    return build_fock(lenczewski_ctx, N=5)


@pytest.fixture
def ma_fock(ma_ctx: AlgebraContext) -> FockContext:
    return build_fock(ma_ctx, N=6)


@pytest.fixture
def matrix_poisson_fock(matrix_poisson_ctx: AlgebraContext) -> FockContext:
    return build_fock(matrix_poisson_ctx, N=4)


# ============================================================================
# Construction C Contexts
# ============================================================================

@pytest.fixture
def scalar_construction() -> ConstructionC:
    """H = R, C = 1/2, Lambda = 0."""
    return build_construction_c({'h_dim': 1, 'C_diagonal': [['1/2']]}, N=5)


@pytest.fixture
def diagonal_construction() -> ConstructionC:
    """H = R^2 with a diagonal C and a pointwise Lambda."""
    lam = [[['1', '0'], ['0', '0']], [['0', '0'], ['0', '-1']]]
    return build_construction_c({'h_dim': 2, 'C_diagonal': [['0', '1/2'], ['1/2', '-1/2']], 'Lambda': lam}, N=5)


# ============================================================================
# Tolerances and Files
# ============================================================================

@pytest.fixture
def float_tol() -> float:
    return NumericConfig.FLOAT_TOLERANCE


@pytest.fixture
def spec_file(tmp_path: Path):
    """Write a spec dict to a temporary JSON file and return its path."""
    def write(spec, name: str = 'spec.json') -> Path:
        path = tmp_path / name
        path.write_text(spec if isinstance(spec, str) else json.dumps(spec))
        return path
    return write


def scalar_values(values) -> list:
    """Fractions from a list of ints / strings."""
    return [Fraction(v) for v in values]


# ============================================================================
# Hypothesis Strategies
# ============================================================================

LAMBDA_SHAPES = ('zero', 'pointwise', 'random')


@st.composite
def random_context(draw, max_dim: int = 2, lower: Fraction = Fraction(-1),
                   families=('ma', 'kernel'), lambda_shapes=LAMBDA_SHAPES) -> AlgebraContext:
    """
    Random commutative context on R^d for property sweeps.

    'ma' draws Example MA with a symmetric C >= lower (entrywise, lower >= -1)
    and a zero, pointwise or unconstrained B tensor, loaded without
    validation. 'kernel' draws a validated discrete Lenczewski kernel
    w >= lower with a pointwise lambda.
    """
    d = draw(st.integers(min_value=1, max_value=max_dim))
    entry = st.fractions(min_value=lower, max_value=2, max_denominator=3)
    family = draw(st.sampled_from(families))
    if family == 'kernel':
        w = [[str(draw(entry)) for _ in range(d)] for _ in range(d)]
        lam = [str(draw(entry)) for _ in range(d)]
        return load_example('lenczewski_discrete', {'w': w, 'lam': lam})

    c = [['0'] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            c[i][j] = c[j][i] = str(draw(entry))
    b = [[['0'] * d for _ in range(d)] for _ in range(d)]
    shape = draw(st.sampled_from(lambda_shapes))
    if shape == 'pointwise':
        for i in range(d):
            b[i][i][i] = str(draw(entry))
    elif shape == 'random':
        for i, j, k in product(range(d), repeat=3):
            b[i][j][k] = str(draw(entry))
    return load_example('ma', {'C': c, 'B': b}, validate=False)
