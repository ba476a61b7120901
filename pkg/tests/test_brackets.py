"""Test functional gradients, classical brackets and the delta probes."""
import cmath
import math

import numpy as np
import pytest

from weyl_lab.brackets import (
    BracketCase,
    FieldRecovery,
    TruncatedGaussian,
    ah_predicted,
    bracket_case,
    classical_bracket_weyl,
    delta_limit_probe,
    fd_gradient_oracle,
    gradient_projection,
    psi_psi_probe,
    reality_relation_residual,
    recover_fields,
    shift_asymptotics_residual,
    weyl_gradients,
    wronskian_identity,
)
from weyl_lab.cover import CoverPoint, Sheet, left_point, right_point
from weyl_lab.exceptions import CoincidentPoints
from weyl_lab.potentials import CompactBump, ConstantPotential, GaussianBump, Mollifier, ZeroPotential
from weyl_lab.weyl import WeylOptions, weyl_function

BUMP = CompactBump(1.0, 0.0, 2.0)
GAUSS = GaussianBump(1.0, 0.0, 1.0)


def test_bracket_case() -> None:
    """Test the RR/LL/RL classification of a pair."""
    assert bracket_case(right_point(1j), right_point(-2j)) is BracketCase.RR
    assert bracket_case(left_point(1j), left_point(2j)) is BracketCase.LL
    assert bracket_case(right_point(1j), left_point(2j)) is BracketCase.RL


def test_ah_predicted() -> None:
    """Test the sign of the predicted bracket per component pair."""
    q, p = right_point(1j), right_point(2j)
    assert ah_predicted(q, p, 0.5, 0.25) == pytest.approx(2 * 0.0625 / (-1j))
    assert ah_predicted(left_point(1j), left_point(2j), 0.5, 0.25) == pytest.approx(-2 * 0.0625 / (-1j))
    assert ah_predicted(q, left_point(2j), 0.5, 0.25) == 0
    with pytest.raises(CoincidentPoints):
        ah_predicted(q, CoverPoint(1j, Sheet.PLUS), 0.5, 0.25)


def test_free_gradients() -> None:
    """Test δX/δψ = −e^{−iλ(y−z)}, δX/δψ̄ = 0 for ψ ≡ 0 at (−i, −)."""
    q = CoverPoint(-1j, Sheet.MINUS)
    for y in (0.0, 0.4, 1.1):
        g = weyl_gradients(ZeroPotential(), 0.0, q, y)
        assert g.d_psi == pytest.approx(-cmath.exp(-1j * q.lam * y), rel=1e-9)
        assert abs(g.d_psibar) <= 1e-12
    behind = weyl_gradients(ZeroPotential(), 0.0, q, -0.5)
    assert behind.d_psi == 0
    assert behind.d_psibar == 0


@pytest.mark.parametrize("q", [right_point(0.3 + 1.0j), right_point(-0.2 - 0.9j), left_point(0.4 + 1.1j)])
def test_gradients_match_finite_differences(q: CoverPoint) -> None:
    """Test the closed-form gradients against the finite-difference oracle."""
    opts = WeylOptions(tol=1e-12)
    side = 1.0 if q.component.value == "R" else -1.0
    center = 0.1 + side * 0.6
    closed = np.array(gradient_projection(GAUSS, 0.1, q, Mollifier(center, 0.25), opts))
    fd = np.array(fd_gradient_oracle(GAUSS, 0.1, q, center, 0.25, h=1e-3, opts=opts, richardson=True))
    assert np.linalg.norm(fd - closed) <= 1e-5 * np.linalg.norm(closed) + 1e-10


def test_gradient_vanishing_side() -> None:
    """Test that perturbations behind the base point leave X unchanged."""
    q = right_point(0.3 + 1.0j)
    fd = fd_gradient_oracle(GAUSS, 0.0, q, -1.0, 0.25)
    assert abs(fd[0]) + abs(fd[1]) <= 1e-8
    assert gradient_projection(GAUSS, 0.0, q, Mollifier(-1.0, 0.25)) == (0j, 0j)


def test_fd_step_range() -> None:
    """Test that the finite-difference step is bounded."""
    with pytest.raises(ValueError):
        fd_gradient_oracle(GAUSS, 0.0, right_point(1j), 0.5, 0.25, h=0.1)


def test_classical_bracket_right_component() -> None:
    """Test the classical bracket against +2(xQ − xP)²/(λQ − λP) with the bump ahead of y."""
    q, p = CoverPoint(1.2j, Sheet.PLUS), CoverPoint(1.36j, Sheet.PLUS)
    sample = classical_bracket_weyl(BUMP, -3.0, q, p)
    predicted = ah_predicted(q, p, weyl_function(BUMP, -3.0, q).finite(), weyl_function(BUMP, -3.0, p).finite())
    assert sample.case is BracketCase.RR
    assert abs(sample.value - predicted) <= 1e-6 * max(1.0, abs(predicted)) + 10 * sample.error_budget


def test_classical_bracket_left_component() -> None:
    """Test the LL sign on a Gaussian field."""
    q, p = left_point(0.3 + 0.8j), left_point(-0.4 - 1.1j)
    sample = classical_bracket_weyl(GAUSS, 0.5, q, p)
    predicted = ah_predicted(q, p, weyl_function(GAUSS, 0.5, q).finite(), weyl_function(GAUSS, 0.5, p).finite())
    assert abs(sample.value - predicted) <= 1e-6 * max(1.0, abs(predicted)) + 10 * sample.error_budget


def test_classical_bracket_vanishing_cases() -> None:
    """Test RL pairs and the free field on sheet −."""
    mixed = classical_bracket_weyl(GAUSS, 0.0, right_point(0.5 + 1j), left_point(-0.5 + 1j))
    assert abs(mixed.value) <= 1e-8
    free = classical_bracket_weyl(ZeroPotential(), 0.0, right_point(0.5 - 1j), right_point(-0.3 - 0.7j))
    assert free.value == 0


def test_field_recovery() -> None:
    """Test ψ̂ and ψ̄̂ for ψ ≡ 1 at τ = 100."""
    rec = recover_fields(ConstantPotential(1.0), 0.0, 100.0)
    assert isinstance(rec, FieldRecovery)
    assert abs(rec.psi_hat - 1) <= 2e-4
    assert rec.conjugate_mismatch <= 1e-4
    with pytest.raises(ValueError):
        recover_fields(GAUSS, 0.0, 5.0)


def test_truncated_gaussian() -> None:
    """Test the test function peak, cut-off and scaling."""
    f = TruncatedGaussian(0.5, 0.25)
    assert f(0.5) == pytest.approx(1.0)
    assert f(0.5 + 8 * 0.25) == 0
    assert f.support == (-1.5, 2.5)
    assert f.scaled(2.0)(0.6) == pytest.approx(2 * f(0.6))


@pytest.mark.parametrize("side", ["right", "left"])
def test_delta_probe(side: str) -> None:
    """Test that each side of the probe tends to i·f(z)."""
    f = TruncatedGaussian(0.0, 0.5)
    errors = [abs(delta_limit_probe(GAUSS, 0.0, f, tau, side) - 1j) for tau in (25.0, 50.0, 100.0)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] <= 5e-2


def test_delta_probe_separated_support() -> None:
    """Test the exponentially small probe for test functions away from z."""
    f = TruncatedGaussian(-4.5, 0.5)
    value = delta_limit_probe(ConstantPotential(1.0), 0.0, f, 50.0)
    assert abs(value) <= 50.0 * math.exp(-25.0)
    with pytest.raises(ValueError):
        delta_limit_probe(GAUSS, 0.0, f, 50.0, side="up")


def test_psi_psi_probe() -> None:
    """Test that the ψ–ψ probe decays with τ."""
    f = TruncatedGaussian(0.0, 0.5)
    values = [abs(psi_psi_probe(GAUSS, 0.0, f, tau)) for tau in (25.0, 50.0, 100.0)]
    assert values[0] > values[1] > values[2]


def test_shift_asymptotics() -> None:
    """Test the convergence of both shift variants and the argument checks."""
    p = right_point(0.3 + 0.8j)
    for end in ("minus", "plus"):
        values = [abs(shift_asymptotics_residual(BUMP, 0.25, -0.25, p, tau, end)) for tau in (20.0, 40.0, 80.0)]
        assert values[0] > values[1] > values[2]
    assert shift_asymptotics_residual(BUMP, 0.3, 0.3, p, 20.0) == 0
    with pytest.raises(ValueError):
        shift_asymptotics_residual(BUMP, -0.3, 0.3, p, 20.0)
    with pytest.raises(ValueError):
        shift_asymptotics_residual(BUMP, 0.3, -0.3, left_point(1j), 20.0)


def test_reality_relation() -> None:
    """Test the reality relation for predicted and quadrature brackets."""
    q, p = right_point(0.3 + 0.8j), right_point(-0.5 - 1.1j)
    assert abs(reality_relation_residual(GAUSS, 0.2, q, p)) <= 1e-8
    assert abs(reality_relation_residual(GAUSS, 0.2, q, p, use_quadrature=True)) <= 1e-5
    assert reality_relation_residual(ZeroPotential(), 0.0, right_point(-1j), right_point(0.5 - 2j)) == 0
    with pytest.raises(ValueError):
        reality_relation_residual(GAUSS, 0.0, left_point(1j), p)


def test_wronskian_identity() -> None:
    """Test the quadrature side against the boundary side."""
    rng = np.random.default_rng(11)
    coefficients = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(4)]
    lhs, rhs = wronskian_identity(GAUSS, 0.3 + 0.5j, -0.6 + 1.2j, -1.0, 1.5, coefficients, tol=1e-12)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-8)
    with pytest.raises(CoincidentPoints):
        wronskian_identity(GAUSS, 1j, 1j, 0.0, 1.0, coefficients)
