"""Transition matrices of the auxiliary problem f′ = V(x, λ) f."""
from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from weyl_lab.exceptions import IntegrationFailure
from weyl_lab.potentials import Potential

logger = logging.getLogger(__name__)

Matrix2 = np.ndarray

SIGMA1: Matrix2 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2: Matrix2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3: Matrix2 = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY: Matrix2 = np.eye(2, dtype=complex)
J: Matrix2 = np.array([[0, 1], [-1, 0]], dtype=complex)
"""Antisymmetric form with fᵀJg = f1·g2 − f2·g1."""

ODE_METHOD = "DOP853"
MIN_RTOL = 2.5e-14


def solver_tolerances(tol: float) -> Tuple[float, float]:
    """(rtol, atol) handed to the integrator for a requested accuracy ``tol``."""
    if tol <= 0:
        msg = f"tolerance must be positive, got {tol}"
        raise ValueError(msg)
    rtol = max(tol * 1e-2, MIN_RTOL)
    return rtol, rtol


def coefficient_matrix(p: Potential, x: float, lam: complex) -> Matrix2:
    """V(x, λ) = −iλ/2·σ3 + [[0, ψ̄], [ψ, 0]]."""
    psi = p(x)
    return np.array([[-0.5j * lam, psi.conjugate()], [psi, 0.5j * lam]], dtype=complex)


def sigma1_conjugate(m: Matrix2) -> Matrix2:
    """σ1·conj(M)·σ1."""
    return SIGMA1 @ np.conj(m) @ SIGMA1


def bilinear(f: np.ndarray, g: np.ndarray) -> complex:
    """fᵀJg."""
    return complex(f[0] * g[1] - f[1] * g[0])


def free_transition_matrix(x: float, y: float, lam: complex) -> Matrix2:
    """M(x, y, λ) for ψ ≡ 0: diag(e^{−iλ(x−y)/2}, e^{iλ(x−y)/2})."""
    s = x - y
    return np.diag([cmath.exp(-0.5j * lam * s), cmath.exp(0.5j * lam * s)])


def growth_bound(x: float, y: float, lam: complex) -> float:
    """e^{|Im λ|·|x − y|/2}, the free growth factor over [y, x]."""
    return float(np.exp(0.5 * abs(lam.imag) * abs(x - y)))


def linear_rhs(p: Potential, lam: complex) -> Callable[[float, np.ndarray], np.ndarray]:
    """Right-hand side of f′ = V f for a stack of columns stored row-major in a flat array."""
    v11 = -0.5j * lam

    def rhs(t: float, f: np.ndarray) -> np.ndarray:
        psi = p(t)
        rows = f.reshape(2, -1)
        out = np.empty_like(rows)
        out[0] = v11 * rows[0] + psi.conjugate() * rows[1]
        out[1] = psi * rows[0] - v11 * rows[1]
        return out.ravel()

    return rhs


@dataclass(frozen=True)
class TransitionMatrix:
    """M(to_x, from_x, λ) with M(y, y) = I."""

    m: Matrix2
    from_x: float
    to_x: float
    lam: complex
    estimated_error: float
    peak: float = 1.0

    @property
    def m11(self) -> complex:
        return complex(self.m[0, 0])

    @property
    def m12(self) -> complex:
        return complex(self.m[0, 1])

    @property
    def m21(self) -> complex:
        return complex(self.m[1, 0])

    @property
    def m22(self) -> complex:
        return complex(self.m[1, 1])

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.m))

    def column(self, k: int) -> np.ndarray:
        """M^(k) for k = 1, 2."""
        return self.m[:, k - 1]

    def norm(self) -> float:
        return float(np.max(np.abs(self.m)))

    def compose(self, other: "TransitionMatrix") -> "TransitionMatrix":
        """M(x, y)·M(y, z) = M(x, z)."""
        if other.to_x != self.from_x:
            msg = f"cannot compose M({self.to_x}, {self.from_x}) with M({other.to_x}, {other.from_x})"
            raise ValueError(msg)
        err = self.estimated_error * other.norm() + self.norm() * other.estimated_error
        return TransitionMatrix(
            self.m @ other.m, other.from_x, self.to_x, self.lam, err, max(self.peak, other.peak)
        )


class TransitionSolution:
    """Dense-output solution of M′ = V M on the span between ``y`` and ``x_end``."""

    def __init__(self, p: Potential, y: float, x_end: float, lam: complex, tol: float = 1e-10):
        self.potential = p
        self.y = y
        self.x_end = x_end
        self.lam = lam
        self.tol = tol

        rtol, atol = solver_tolerances(tol)
        self._sol: Optional[object] = None
        self.n_steps = 0
        self.peak = 1.0
        if x_end == y:
            self.estimated_error = 0.0
            return

        logger.debug(f"transition: span[{y}, {x_end}], lam[{lam}], rtol[{rtol}]")
        res = solve_ivp(
            linear_rhs(p, lam),
            (y, x_end),
            IDENTITY.ravel().copy(),
            method=ODE_METHOD,
            rtol=rtol,
            atol=atol,
            dense_output=True,
        )
        if res.status != 0:
            msg = f"transition matrix integration failed on [{y}, {x_end}] at λ={lam}: {res.message}"
            raise IntegrationFailure(msg)
        self._sol = res.sol
        self._end = res.y[:, -1].reshape(2, 2)
        self.n_steps = len(res.t) - 1
        self.peak = max(1.0, float(np.max(np.abs(res.y))))
        # accumulated per-step bound of the controller, scaled to determinant cancellation
        self.estimated_error = self.n_steps * (atol + rtol * self.peak) * self.peak
        logger.debug(f"transition: steps[{self.n_steps}], peak[{self.peak:.3e}], err[{self.estimated_error:.3e}]")

    def __call__(self, x: float) -> Matrix2:
        if x == self.y or self._sol is None:
            return IDENTITY.copy()
        if x == self.x_end:
            return self._end.copy()
        return np.asarray(self._sol(x)).reshape(2, 2)

    def matrix(self, x: Optional[float] = None) -> TransitionMatrix:
        x = self.x_end if x is None else x
        return TransitionMatrix(self(x), self.y, x, self.lam, self.estimated_error, self.peak)


def transition_matrix(p: Potential, x: float, y: float, lam: complex, tol: float = 1e-10) -> TransitionMatrix:
    """M(x, y, λ) by adaptive embedded Runge–Kutta integration from y to x.

    Args:
        p: the potential.
        x: end point.
        y: start point, where M = I.
        lam: spectral parameter.
        tol: requested accuracy.

    Returns:
        The transition matrix with its accumulated error estimate.
    """
    if x == y:
        return TransitionMatrix(IDENTITY.copy(), y, x, lam, 0.0)
    return TransitionSolution(p, y, x, lam, tol).matrix()


def constant_potential_oracle(c: complex, x: float, y: float, lam: complex) -> TransitionMatrix:
    """Closed form cosh(μs)·I + sinh(μs)/μ·V for ψ ≡ c, μ² = |c|² − λ²/4, s = x − y."""
    s = x - y
    if s == 0:
        return TransitionMatrix(IDENTITY.copy(), y, x, lam, 0.0)
    mu = cmath.sqrt(abs(c) ** 2 - lam * lam / 4)
    z = mu * s
    sinhc = s * (1 + z * z / 6) if abs(z) < 1e-8 else cmath.sinh(z) / mu  # noqa: PLR2004
    v = np.array([[-0.5j * lam, complex(c).conjugate()], [c, 0.5j * lam]], dtype=complex)
    m = cmath.cosh(z) * IDENTITY + sinhc * v
    peak = max(1.0, float(np.max(np.abs(m))))
    return TransitionMatrix(m, y, x, lam, 1e-15 * peak * peak, peak)
