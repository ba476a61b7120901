"""Test transition matrices of the auxiliary problem."""
import cmath
import math

import numpy as np
import pytest

from weyl_lab.dirac import (
    IDENTITY,
    TransitionSolution,
    coefficient_matrix,
    constant_potential_oracle,
    free_transition_matrix,
    sigma1_conjugate,
    solver_tolerances,
    transition_matrix,
)
from weyl_lab.potentials import CompactBump, ConstantPotential, GaussianBump, ZeroPotential

BUMP = CompactBump(1.0, 0.0, 2.0)


def test_coefficient_matrix() -> None:
    """Test V(x, λ) for ψ = 1 + i."""
    v = coefficient_matrix(ConstantPotential(1 + 1j), 0.0, 2j)
    assert np.allclose(v, [[1, 1 - 1j], [1 + 1j, -1]])
    assert np.trace(v) == 0


def test_identity_at_coincident_points() -> None:
    """Test M(y, y) = I."""
    tm = transition_matrix(BUMP, 0.4, 0.4, 1 + 1j)
    assert np.array_equal(tm.m, IDENTITY)
    assert tm.estimated_error == 0


def test_free_field() -> None:
    """Test M = exp(−iλ(x−y)σ3/2) for ψ ≡ 0."""
    tm = transition_matrix(ZeroPotential(), 1.5, -0.5, 0.3 + 0.7j)
    assert np.allclose(tm.m, free_transition_matrix(1.5, -0.5, 0.3 + 0.7j), rtol=1e-9, atol=1e-12)


def test_unit_determinant() -> None:
    """Test det M = 1 within the error estimate."""
    tm = transition_matrix(BUMP, 2.5, -2.5, 0.4 + 1.1j)
    assert abs(tm.det - 1) <= 10 * tm.estimated_error + 1e-13


def test_sigma1_symmetry() -> None:
    """Test σ1·conj(M(λ))·σ1 = M(λ̄)."""
    lam = -0.3 + 0.9j
    a = transition_matrix(GaussianBump(0.5 + 0.5j, 0.0, 1.0), 1.0, -2.0, lam)
    b = transition_matrix(GaussianBump(0.5 + 0.5j, 0.0, 1.0), 1.0, -2.0, lam.conjugate())
    assert np.max(np.abs(sigma1_conjugate(a.m) - b.m)) <= 10 * (a.estimated_error + b.estimated_error)


def test_composition() -> None:
    """Test M(x, y)·M(y, z) = M(x, z)."""
    lam = 0.2 + 0.6j
    direct = transition_matrix(BUMP, 1.0, -1.5, lam)
    composed = transition_matrix(BUMP, 1.0, 0.2, lam).compose(transition_matrix(BUMP, 0.2, -1.5, lam))
    assert np.allclose(direct.m, composed.m, rtol=1e-8, atol=1e-10)
    with pytest.raises(ValueError):
        transition_matrix(BUMP, 1.0, 0.2, lam).compose(transition_matrix(BUMP, 0.3, -1.5, lam))


def test_constant_oracle() -> None:
    """Test the closed form for ψ ≡ 1 at λ = 2i against integration."""
    oracle = constant_potential_oracle(1.0, 1.0, 0.0, 2j)
    s2 = math.sqrt(2)
    expected = cmath.cosh(s2) * IDENTITY + cmath.sinh(s2) / s2 * np.array([[1, 1], [1, -1]])
    assert np.allclose(oracle.m, expected)
    numeric = transition_matrix(ConstantPotential(1.0), 1.0, 0.0, 2j)
    assert np.max(np.abs(numeric.m - oracle.m)) <= 10 * numeric.estimated_error + 1e-10 * oracle.peak


def test_transition_solution_dense_output() -> None:
    """Test that the dense output agrees with point solves."""
    sol = TransitionSolution(BUMP, -1.0, 2.0, 0.5 + 0.5j)
    mid = transition_matrix(BUMP, 0.5, -1.0, 0.5 + 0.5j)
    assert np.allclose(sol(0.5), mid.m, rtol=1e-7, atol=1e-9)
    assert np.array_equal(sol(-1.0), IDENTITY)


def test_solver_tolerances() -> None:
    """Test the tolerance mapping and its floor."""
    assert solver_tolerances(1e-10) == pytest.approx((1e-12, 1e-12))
    assert solver_tolerances(1e-20)[0] > 0
    with pytest.raises(ValueError):
        solver_tolerances(0.0)
