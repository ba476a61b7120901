"""Atiyah–Hitchin bracket on rational maps X(λ) = −q(λ)/p(λ)."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple

import numpy as np

from weyl_lab.exceptions import CoincidentPoints, DegeneratePoles, PoleEvaluation, ZeroResidueValue

logger = logging.getLogger(__name__)

SEPARATION_FLOOR = 1e-8
"""Minimum distance between poles, and between an evaluation point and a pole."""

CAUCHY_NODES = 256


@dataclass(frozen=True)
class RationalMap:
    """Degree-N rational map with X(∞) = 0 in canonical coordinates (λ_k, q(λ_k))."""

    poles: Tuple[complex, ...]
    numerator_values: Tuple[complex, ...]
    separation: float = SEPARATION_FLOOR
    """Smallest allowed distance between an evaluation point and a pole."""

    @property
    def degree(self) -> int:
        return len(self.poles)

    @cached_property
    def _poles(self) -> np.ndarray:
        return np.asarray(self.poles, dtype=complex)

    @cached_property
    def _values(self) -> np.ndarray:
        return np.asarray(self.numerator_values, dtype=complex)

    @cached_property
    def _inverse_differences(self) -> np.ndarray:
        """Matrix of 1/(λ_j − λ_k) with a zero diagonal."""
        diff = self._poles[:, None] - self._poles[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        return inv

    @cached_property
    def denominator_derivatives(self) -> np.ndarray:
        """p′(λ_k) = Π_{m≠k} (λ_k − λ_m)."""
        diff = self._poles[:, None] - self._poles[None, :]
        np.fill_diagonal(diff, 1.0)
        return np.prod(diff, axis=1)

    @cached_property
    def residues(self) -> np.ndarray:
        """Partial-fraction coefficients c_k = −q(λ_k)/p′(λ_k)."""
        return -self._values / self.denominator_derivatives

    def numerator_coefficients(self) -> np.ndarray:
        """Coefficients of q (lowest degree first), recovered by interpolation through (λ_k, q(λ_k))."""
        vander = np.vander(self._poles, self.degree, increasing=True)
        return np.linalg.solve(vander, self._values)

    def denominator_coefficients(self) -> np.ndarray:
        """Coefficients of the monic p(λ) = Π(λ − λ_k), lowest degree first."""
        return np.poly(self._poles)[::-1]

    def __call__(self, lam: complex) -> complex:
        return eval_map(self, lam)


@dataclass(frozen=True)
class MobiusCoeffs:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        if self.determinant == 0:
            msg = f"degenerate Möbius coefficients: ad - bc = 0 for {(self.a, self.b, self.c, self.d)}"
            raise ValueError(msg)

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c


def make_rational_map(
    poles: Sequence[complex],
    numerator_values: Sequence[complex],
    separation: float = SEPARATION_FLOOR,
) -> RationalMap:
    """Validate canonical coordinates and build a RationalMap.

    Args:
        poles: pole locations λ_1..λ_N.
        numerator_values: q(λ_1)..q(λ_N).
        separation: minimum allowed pairwise pole distance, kept on the map as the evaluation floor.

    Returns:
        The validated map.
    """
    if len(poles) != len(numerator_values):
        msg = f"got {len(poles)} poles but {len(numerator_values)} numerator values"
        raise ValueError(msg)
    if len(poles) == 0:
        err = "a rational map needs at least one pole"
        raise ValueError(err)

    lam = np.asarray(poles, dtype=complex)
    q = np.asarray(numerator_values, dtype=complex)
    for j in range(len(lam)):
        for k in range(j + 1, len(lam)):
            if abs(lam[j] - lam[k]) < separation:
                msg = f"poles {lam[j]} and {lam[k]} are closer than {separation}"
                raise DegeneratePoles(msg)
    zero = np.flatnonzero(q == 0)
    if zero.size:
        msg = f"numerator value vanishes at pole {lam[zero[0]]}"
        raise ZeroResidueValue(msg)

    return RationalMap(tuple(complex(v) for v in lam), tuple(complex(v) for v in q), separation)


def _pole_distances(rmap: RationalMap, lam: complex) -> np.ndarray:
    d = lam - rmap._poles
    near = np.flatnonzero(np.abs(d) < rmap.separation)
    if near.size:
        msg = f"evaluation point {lam} is at the pole {rmap.poles[near[0]]}"
        raise PoleEvaluation(msg)
    return d


def eval_map(rmap: RationalMap, lam: complex) -> complex:
    """X(λ) = Σ_k c_k/(λ − λ_k)."""
    d = _pole_distances(rmap, lam)
    return complex(np.sum(rmap.residues / d))


def ah_bracket(x_lam: complex, x_mu: complex, lam: complex, mu: complex) -> complex:
    """{X(λ), X(μ)} = (X(λ) − X(μ))²/(λ − μ), zero at coincident points."""
    if lam == mu:
        return 0j
    return complex((x_lam - x_mu) ** 2 / (lam - mu))


def coordinate_gradients(rmap: RationalMap, lam: complex) -> Tuple[np.ndarray, np.ndarray]:
    """Closed-form (∂X(λ)/∂q_k, ∂X(λ)/∂λ_k) for k = 1..N."""
    d = _pole_distances(rmap, lam)
    c = rmap.residues
    inv = rmap._inverse_differences

    d_q = -1.0 / (rmap.denominator_derivatives * d)
    # moving λ_k shifts its own pole and rescales every residue through p′
    d_lam = c / d**2 - c * inv.sum(axis=1) / d + (c / d) @ inv
    return d_q, d_lam


def canonical_bracket(rmap: RationalMap, lam: complex, mu: complex) -> complex:
    """{X(λ), X(μ)} by the chain rule over {q_n, λ_k} = δ_nk q_n."""
    dq_lam, dl_lam = coordinate_gradients(rmap, lam)
    dq_mu, dl_mu = coordinate_gradients(rmap, mu)
    q = rmap._values
    return complex(np.sum(q * (dq_lam * dl_mu - dl_lam * dq_mu)))


def mobius_apply(x: complex, m: MobiusCoeffs) -> complex:
    """(a·x + b)/(c·x + d); raises PoleEvaluation where c·x + d = 0."""
    den = m.c * x + m.d
    if den == 0:
        msg = f"Möbius map has a pole at x = {x}"
        raise PoleEvaluation(msg)
    return (m.a * x + m.b) / den


def mobius_derivative(x: complex, m: MobiusCoeffs) -> complex:
    """(ad − bc)/(c·x + d)², the derivative of mobius_apply in x."""
    den = m.c * x + m.d
    if den == 0:
        msg = f"Möbius map has a pole at x = {x}"
        raise PoleEvaluation(msg)
    return m.determinant / den**2


def mobius_bracket(x_lam: complex, x_mu: complex, lam: complex, mu: complex, m: MobiusCoeffs) -> complex:
    """{m∘X(λ), m∘X(μ)} expanded by the Leibniz rule: m′(X(λ))·m′(X(μ))·{X(λ), X(μ)}."""
    return mobius_derivative(x_lam, m) * mobius_derivative(x_mu, m) * ah_bracket(x_lam, x_mu, lam, mu)


def _nested(xa: complex, xb: complex, xc: complex, la: complex, lb: complex, lc: complex) -> complex:
    # {x_a, (x_b − x_c)²/(λ_b − λ_c)} by linearity and Leibniz
    g = 2 * (xb - xc) / (lb - lc)
    return g * ah_bracket(xa, xb, la, lb) - g * ah_bracket(xa, xc, la, lc)


def jacobi_terms(
    x1: complex, x2: complex, x3: complex, lam: complex, mu: complex, nu: complex
) -> Tuple[complex, complex, complex]:
    points = (lam, mu, nu)
    for j in range(3):
        for k in range(j + 1, 3):
            if abs(points[j] - points[k]) < SEPARATION_FLOOR:
                msg = f"Jacobi identity needs distinct points, got {points[j]} and {points[k]}"
                raise CoincidentPoints(msg)
    return (
        _nested(x1, x2, x3, lam, mu, nu),
        _nested(x2, x3, x1, mu, nu, lam),
        _nested(x3, x1, x2, nu, lam, mu),
    )


def jacobi_cyclic_sum(x1: complex, x2: complex, x3: complex, lam: complex, mu: complex, nu: complex) -> complex:
    """Cyclic sum {X(λ),{X(μ),X(ν)}} + ... which vanishes for a Poisson bracket."""
    return complex(sum(jacobi_terms(x1, x2, x3, lam, mu, nu)))


def cauchy_reproduction(
    rmap: RationalMap,
    lam: complex,
    mu: complex,
    center: complex,
    radius: float,
    nodes: int = CAUCHY_NODES,
) -> complex:
    """Trapezoid rule for (1/2πi)∮ {X(ζ),X(μ)}/(ζ − λ) dζ over the circle |ζ − center| = radius.

    All poles must lie outside the circle and λ inside it; the result then approximates {X(λ),X(μ)}.
    """
    if np.any(np.abs(rmap._poles - center) <= radius):
        msg = f"a pole lies inside the contour |ζ - {center}| = {radius}"
        raise PoleEvaluation(msg)
    if abs(lam - center) >= radius:
        msg = f"λ = {lam} is not inside the contour"
        raise ValueError(msg)

    theta = 2 * np.pi * np.arange(nodes) / nodes
    zeta = center + radius * np.exp(1j * theta)
    d = zeta[:, None] - rmap._poles[None, :]
    if np.any(np.abs(d) < rmap.separation):
        msg = f"the contour |ζ - {center}| = {radius} passes through a pole"
        raise PoleEvaluation(msg)
    x_zeta = (rmap.residues[None, :] / d).sum(axis=1)
    x_mu = eval_map(rmap, mu)

    # a node at μ contributes zero
    gap = zeta - mu
    at_mu = gap == 0
    brackets = np.where(at_mu, 0j, (x_zeta - x_mu) ** 2 / np.where(at_mu, 1.0, gap))
    value = np.sum(brackets * (zeta - center) / (zeta - lam)) / nodes
    logger.debug(f"cauchy reproduction: nodes[{nodes}], radius[{radius}], value[{value}]")
    return complex(value)


def random_rational_map(
    rng: np.random.Generator,
    degree: int,
    radius: float = 1.0,
    min_separation: float = 0.3,
) -> RationalMap:
    """Draw poles in the disc |λ| < radius with a minimum separation and moderate numerator values."""
    poles = []
    while len(poles) < degree:
        r = radius * np.sqrt(rng.uniform())
        candidate = complex(r * np.exp(2j * np.pi * rng.uniform()))
        if all(abs(candidate - p) >= min_separation for p in poles):
            poles.append(candidate)
    magnitudes = rng.uniform(0.5, 2.0, size=degree)
    phases = rng.uniform(0.0, 2 * np.pi, size=degree)
    return make_rational_map(poles, list(magnitudes * np.exp(1j * phases)))
