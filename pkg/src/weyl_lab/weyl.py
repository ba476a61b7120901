"""Weyl functions X(y, Q) and Weyl solutions e(x, y, Q) of the auxiliary problem."""
from __future__ import annotations

import cmath
import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp

from weyl_lab.cover import Component, CoverPoint, Sheet, left_point, right_point
from weyl_lab.dirac import ODE_METHOD, linear_rhs, solver_tolerances, transition_matrix
from weyl_lab.exceptions import (
    DegenerateExpansionPoint,
    IntegrationFailure,
    NotNormalizable,
    PoleEvaluation,
    TruncationFailure,
)
from weyl_lab.potentials import ConstantPotential, Potential, ZeroPotential

logger = logging.getLogger(__name__)

MAX_CHART_SWITCHES = 500


class WeylMethod(str, enum.Enum):
    RICCATI_BACKWARD = "riccati-backward"
    BOUNDARY_RATIO = "boundary-ratio"
    CONSTANT_ORACLE = "constant-oracle"


class PoleAtInfinity:
    """Marker for X = ∞."""

    _instance: Optional["PoleAtInfinity"] = None

    def __new__(cls) -> "PoleAtInfinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "POLE"


POLE = PoleAtInfinity()


@dataclass(frozen=True)
class WeylOptions:
    tol: float = 1e-10
    """Target accuracy of X, also the integrator tolerance."""

    max_radius: float = 60.0
    """Largest allowed distance between the base point and the truncation point."""

    cross_check: bool = True
    """Also run the boundary-ratio method and fold the discrepancy into error_estimate."""

    def without_cross_check(self) -> "WeylOptions":
        """The same options with the boundary-ratio check switched off, for inner loops."""
        return replace(self, cross_check=False)


DEFAULT_OPTIONS = WeylOptions()


@dataclass(frozen=True)
class WeylValue:
    """X(y, Q) in the chart where the stored coordinate has magnitude ≤ 1.

    ``coordinate`` is X itself, or 1/X when ``reciprocal`` is set; a zero reciprocal coordinate is X = ∞.
    """

    coordinate: complex
    reciprocal: bool
    method: WeylMethod
    truncation_radius: float = 0.0
    error_estimate: float = 0.0

    @classmethod
    def from_pair(
        cls,
        e1: complex,
        e2: complex,
        method: WeylMethod,
        truncation_radius: float = 0.0,
        error_estimate: float = 0.0,
    ) -> "WeylValue":
        """X = e2/e1 from a homogeneous pair."""
        if e1 == 0 and e2 == 0:
            err = "the zero vector does not define a Weyl value"
            raise ValueError(err)
        if abs(e2) <= abs(e1):
            return cls(complex(e2 / e1), False, method, truncation_radius, error_estimate)
        return cls(complex(e1 / e2), True, method, truncation_radius, error_estimate)

    @property
    def is_pole(self) -> bool:
        return self.reciprocal and self.coordinate == 0

    @property
    def value(self) -> Union[complex, PoleAtInfinity]:
        if self.is_pole:
            return POLE
        return 1 / self.coordinate if self.reciprocal else self.coordinate

    @property
    def magnitude(self) -> float:
        if self.is_pole:
            return math.inf
        return 1 / abs(self.coordinate) if self.reciprocal else abs(self.coordinate)

    @property
    def pair(self) -> Tuple[complex, complex]:
        """Homogeneous (e1, e2) with X = e2/e1."""
        return (self.coordinate, 1 + 0j) if self.reciprocal else (1 + 0j, self.coordinate)

    def finite(self) -> complex:
        if self.is_pole:
            err = "X = ∞: the Weyl solution has vanishing first component"
            raise NotNormalizable(err)
        return complex(self.value)  # type: ignore[arg-type]

    def inverse(self) -> complex:
        """1/X, zero at the pole."""
        if not self.reciprocal:
            if self.coordinate == 0:
                err = "1/X requested where X = 0"
                raise PoleEvaluation(err)
            return 1 / self.coordinate
        return self.coordinate


def chordal_distance(a: Union[WeylValue, complex], b: Union[WeylValue, complex]) -> float:
    """Distance on the Riemann sphere, finite at X = ∞."""
    a1, a2 = a.pair if isinstance(a, WeylValue) else (1 + 0j, complex(a))
    b1, b2 = b.pair if isinstance(b, WeylValue) else (1 + 0j, complex(b))
    num = abs(a1 * b2 - a2 * b1)
    den = math.sqrt((abs(a1) ** 2 + abs(a2) ** 2) * (abs(b1) ** 2 + abs(b2) ** 2))
    return num / den


def unit_circle_consistent(q: CoverPoint, value: WeylValue) -> bool:
    """|X| > 1 on sheet Plus and |X| < 1 on sheet Minus, for both components."""
    if q.sheet is Sheet.PLUS:
        return value.reciprocal and abs(value.coordinate) < 1
    return not value.reciprocal and abs(value.coordinate) < 1


def decaying_vector(p: Potential, lam: complex, component: Component) -> np.ndarray:
    """Direction of the solution decaying toward +∞ (Γ_R) or −∞ (Γ_L) beyond the support of p.

    For a constant field this is the eigenvector of V with the decaying eigenvalue; otherwise the
    free columns: (0, 1) on sheet Plus, (1, 0) on sheet Minus.
    """
    if isinstance(p, (ConstantPotential, ZeroPotential)):
        c = complex(p.c) if isinstance(p, ConstantPotential) else 0j
        a = 0.5j * lam
        mu = cmath.sqrt(abs(c) ** 2 - lam * lam / 4)
        if (component is Component.R) == (mu.real > 0):
            mu = -mu
        first = np.array([c.conjugate(), mu + a], dtype=complex)
        second = np.array([mu - a, c], dtype=complex)
        v = first if np.linalg.norm(first) >= np.linalg.norm(second) else second
        return v / np.linalg.norm(v)
    plus = (component is Component.R) == (lam.imag > 0)
    return np.array([0, 1], dtype=complex) if plus else np.array([1, 0], dtype=complex)


def truncation(
    p: Potential, y: float, q: CoverPoint, opts: WeylOptions = DEFAULT_OPTIONS, reach: float = 0.0
) -> Tuple[float, float]:
    """Truncation point b (or a for Γ_L) and the bound on the error it introduces in X.

    Past the support edge the free start is exact up to tail_bound/|Im λ|. When the edge is farther than
    the contraction length 2·ln(1/tol)/|Im λ| the start is placed at the contraction length instead.
    """
    kappa = abs(q.lam.imag)
    sign = 1.0 if q.component is Component.R else -1.0
    lo, hi = p.effective_support
    edge_dist = max(hi - y, 0.0) if sign > 0 else max(y - lo, 0.0)
    contraction = 2.0 * math.log(1.0 / opts.tol) / kappa

    if isinstance(p, (ConstantPotential, ZeroPotential)):
        length, bound = 0.0, 0.0
    elif edge_dist <= contraction:
        length, bound = edge_dist, p.tail_bound / kappa
    else:
        length, bound = contraction, math.exp(-kappa * contraction)
    length = max(length, reach)
    if length > opts.max_radius:
        msg = (
            f"truncation length {length:.3g} exceeds max_radius {opts.max_radius} "
            f"(y={y}, λ={q.lam}, support=({lo}, {hi}))"
        )
        raise TruncationFailure(msg)
    return y + sign * length, bound


def constant_weyl_value(p: Potential, q: CoverPoint) -> WeylValue:
    """Closed-form X for ψ ≡ c: the eigenvector ratio (μ + iλ/2)/c̄ of the decaying eigenvalue μ."""
    v = decaying_vector(p, q.lam, q.component)
    return WeylValue.from_pair(v[0], v[1], WeylMethod.CONSTANT_ORACLE)


def _riccati_rhs(p: Potential, lam: complex, reciprocal: bool):  # noqa: FBT001
    if reciprocal:

        def rhs(t: float, w: np.ndarray) -> np.ndarray:
            psi = p(t)
            return -1j * lam * w + psi.conjugate() - psi * w * w

    else:

        def rhs(t: float, w: np.ndarray) -> np.ndarray:
            psi = p(t)
            return 1j * lam * w + psi - psi.conjugate() * w * w

    return rhs


def _leaves_unit_disc(t: float, w: np.ndarray) -> float:  # noqa: ARG001
    return abs(w[0]) - 1.0


_leaves_unit_disc.terminal = True  # type: ignore[attr-defined]
_leaves_unit_disc.direction = 1  # type: ignore[attr-defined]


def riccati_backward(
    p: Potential, y: float, q: CoverPoint, opts: WeylOptions = DEFAULT_OPTIONS
) -> WeylValue:
    """Integrate X′ = iλX + ψ − ψ̄X² from the truncation point to y.

    Y = 1/X obeys Y′ = −iλY + ψ̄ − ψY² and is used instead where |X| > 1.
    The active chart is switched whenever its variable leaves the unit disc.
    """
    b, bound = truncation(p, y, q, opts)
    start = decaying_vector(p, q.lam, q.component)
    current = WeylValue.from_pair(start[0], start[1], WeylMethod.RICCATI_BACKWARD)
    w, reciprocal = current.coordinate, current.reciprocal
    rtol, atol = solver_tolerances(opts.tol)

    t = b
    steps = 0
    switches = 0
    while t != y:
        res = solve_ivp(
            _riccati_rhs(p, q.lam, reciprocal),
            (t, y),
            np.array([w], dtype=complex),
            method=ODE_METHOD,
            rtol=rtol,
            atol=atol,
            events=_leaves_unit_disc,
        )
        if res.status == -1:
            msg = f"Riccati integration failed on [{y}, {t}] at {q}: {res.message}"
            raise IntegrationFailure(msg)
        steps += len(res.t) - 1
        if res.status == 1:
            t = float(res.t_events[0][0])
            w = 1 / complex(res.y_events[0][0][0])
            reciprocal = not reciprocal
            switches += 1
            if switches > MAX_CHART_SWITCHES:
                msg = f"more than {MAX_CHART_SWITCHES} chart switches integrating the Riccati equation at {q}"
                raise IntegrationFailure(msg)
            continue
        w = complex(res.y[0, -1])
        t = y

    integrator = steps * (atol + rtol)
    logger.debug(
        f"riccati: y[{y}], Q[{q.lam}, {q.sheet.value}], b[{b}], steps[{steps}], switches[{switches}], "
        f"integrator[{integrator:.2e}], truncation[{bound:.2e}]"
    )
    pair = (w, 1 + 0j) if reciprocal else (1 + 0j, w)
    return WeylValue.from_pair(
        pair[0], pair[1], WeylMethod.RICCATI_BACKWARD, abs(b - y), max(integrator, bound)
    )


def boundary_ratio(p: Potential, y: float, q: CoverPoint, opts: WeylOptions = DEFAULT_OPTIONS) -> WeylValue:
    """X ≈ (m11 − m21)/(m22 − m12) evaluated at M(b, y, λ), with b pushed away from y until it settles.

    For Γ_L the same ratio is taken at a left end point a < y.
    """
    kappa = abs(q.lam.imag)
    sign = 1.0 if q.component is Component.R else -1.0
    lo, hi = p.effective_support
    edge_dist = max(hi - y, 0.0) if sign > 0 else max(y - lo, 0.0)
    if math.isinf(edge_dist):
        edge_dist = 0.0
    step = math.log(10.0) / kappa
    b = y + sign * max(edge_dist, step)

    m_total = transition_matrix(p, b, y, q.lam, opts.tol)
    m = m_total.m / m_total.norm()
    integrator = m_total.estimated_error / m_total.peak**2

    def ratio(mat: np.ndarray) -> WeylValue:
        return WeylValue.from_pair(mat[1, 1] - mat[0, 1], mat[0, 0] - mat[1, 0], WeylMethod.BOUNDARY_RATIO)

    prev = ratio(m)
    while abs(b - y) < opts.max_radius:
        b_next = b + sign * step
        chunk = transition_matrix(p, b_next, b, q.lam, opts.tol)
        m = chunk.m @ m
        m = m / np.max(np.abs(m))
        integrator += chunk.estimated_error / chunk.peak**2
        cur = ratio(m)
        diff = chordal_distance(cur, prev)
        b = b_next
        if diff < opts.tol:
            logger.debug(f"boundary ratio: y[{y}], Q[{q.lam}, {q.sheet.value}], b[{b}], diff[{diff:.2e}]")
            return replace(cur, truncation_radius=abs(b - y), error_estimate=max(diff, integrator))
        prev = cur

    msg = f"boundary ratio did not settle within max_radius {opts.max_radius} at y={y}, {q}"
    raise TruncationFailure(msg)


def weyl_function(
    p: Potential,
    y: float,
    q: CoverPoint,
    opts: WeylOptions = DEFAULT_OPTIONS,
    method: Optional[WeylMethod] = None,
) -> WeylValue:
    """X(y, Q).

    Args:
        p: the potential.
        y: base point.
        q: point of the spectral cover.
        opts: tolerance, truncation cap and cross-check switch.
        method: force a method; by default the closed form for constant fields and the backward Riccati
            integration otherwise.

    Returns:
        The Weyl value with its method tag, truncation radius and error estimate.
    """
    if method is WeylMethod.BOUNDARY_RATIO:
        return boundary_ratio(p, y, q, opts)
    if method is None and isinstance(p, (ConstantPotential, ZeroPotential)):
        return constant_weyl_value(p, q)

    primary = riccati_backward(p, y, q, opts)
    if not opts.cross_check:
        return primary
    # the ratio settles one contraction length past the support edge
    reach = opts.max_radius + 2.0 * math.log(1.0 / opts.tol) / abs(q.lam.imag)
    try:
        check = boundary_ratio(p, y, q, replace(opts, max_radius=reach))
    except TruncationFailure as e:
        logger.warning(f"cross-check skipped: y[{y}], Q[{q.lam}, {q.sheet.value}], reason[{e}]")
        return primary
    discrepancy = chordal_distance(primary, check)
    logger.debug(f"cross-check: y[{y}], Q[{q.lam}, {q.sheet.value}], discrepancy[{discrepancy:.2e}]")
    return replace(primary, error_estimate=max(primary.error_estimate, check.error_estimate, discrepancy))


class WeylSolution:
    """e(x, y, Q) = M^(1)(x, y) + X(y, Q)·M^(2)(x, y) on the decaying side of y.

    The decaying solution is integrated backward from the truncation point, where it is dominant, and
    normalized so that e1(y) = 1. ``reach`` is the distance from y over which e must be available.
    """

    def __init__(
        self,
        p: Potential,
        y: float,
        q: CoverPoint,
        reach: float = 0.0,
        opts: WeylOptions = DEFAULT_OPTIONS,
    ):
        self.potential = p
        self.y = y
        self.q = q
        self.opts = opts
        self.end, self.truncation_error = truncation(p, y, q, opts, reach)

        start = decaying_vector(p, q.lam, q.component)
        rtol, atol = solver_tolerances(opts.tol)
        self._sol = None
        self.n_steps = 0
        if self.end == y:
            at_y = start
        else:
            res = solve_ivp(
                linear_rhs(p, q.lam),
                (self.end, y),
                start,
                method=ODE_METHOD,
                rtol=rtol,
                atol=atol,
                dense_output=True,
            )
            if res.status != 0:
                msg = f"Weyl solution integration failed on [{y}, {self.end}] at {q}: {res.message}"
                raise IntegrationFailure(msg)
            self._sol = res.sol
            self.n_steps = len(res.t) - 1
            at_y = res.y[:, -1]

        if at_y[0] == 0 or abs(at_y[0]) < 1e-300 * abs(at_y[1]):
            msg = f"X({y}, {q}) is infinite; the Weyl solution cannot be normalized"
            raise NotNormalizable(msg)
        self._scale = 1 / complex(at_y[0])
        self.x_value = complex(at_y[1]) * self._scale
        self.estimated_error = max(self.n_steps * (atol + rtol), self.truncation_error)

    @property
    def sign(self) -> float:
        return 1.0 if self.q.component is Component.R else -1.0

    def __call__(self, x: float) -> np.ndarray:
        if x == self.y:
            return np.array([1.0, self.x_value], dtype=complex)
        offset = self.sign * (x - self.y)
        if offset < 0:
            msg = f"x={x} is not on the decaying side of y={self.y} for {self.q.component.value}"
            raise ValueError(msg)
        if offset > abs(self.end - self.y) * (1 + 1e-12):
            msg = f"x={x} is beyond the integrated range ending at {self.end}"
            raise ValueError(msg)
        return np.asarray(self._sol(x), dtype=complex) * self._scale


def weyl_solution(
    p: Potential, x: float, y: float, q: CoverPoint, opts: WeylOptions = DEFAULT_OPTIONS
) -> np.ndarray:
    """e(x, y, Q), with e1(y, y, Q) = 1."""
    return WeylSolution(p, y, q, reach=abs(x - y), opts=opts)(x)


def weyl_alpha_from_pair(e1: complex, e2: complex, alpha: float) -> complex:
    """X_α = (e1 e^{−iα} − e2 e^{iα})/(i e1 e^{−iα} + i e2 e^{iα})."""
    a = e1 * cmath.exp(-1j * alpha)
    b = e2 * cmath.exp(1j * alpha)
    den = 1j * (a + b)
    if abs(den) <= 1e-14 * (abs(a) + abs(b)):
        msg = f"X = -exp(-2iα) at α={alpha}: the α-normalized value is infinite"
        raise PoleEvaluation(msg)
    return complex((a - b) / den)


def rotate_alpha(x_beta: complex, alpha: float, beta: float) -> complex:
    """X_α from X_β: (X_β cos(α−β) − sin(α−β))/(X_β sin(α−β) + cos(α−β))."""
    d = alpha - beta
    den = x_beta * math.sin(d) + math.cos(d)
    if den == 0:
        msg = f"rotation by {d} sends X_β = {x_beta} to infinity"
        raise PoleEvaluation(msg)
    return (x_beta * math.cos(d) - math.sin(d)) / den


def weyl_alpha(
    p: Potential,
    y: float,
    lam: complex,
    alpha: float,
    side: str = "plus",
    opts: WeylOptions = DEFAULT_OPTIONS,
) -> complex:
    """α-normalized Weyl function X_α^± (side "plus": right half-line, "minus": left half-line)."""
    if side not in ("plus", "minus"):
        msg = f"side must be 'plus' or 'minus', got {side!r}"
        raise ValueError(msg)
    q = right_point(lam) if side == "plus" else left_point(lam)
    value = weyl_function(p, y, q, opts)
    return weyl_alpha_from_pair(*value.pair, alpha)


def transport_weyl_value(
    p: Potential, x: float, y: float, q: CoverPoint, at_x: WeylValue, tol: float = 1e-10
) -> WeylValue:
    """X(y, Q) = (m22 X(x) + m21)/(m12 X(x) + m11) with M = M(y, x, λ)."""
    m = transition_matrix(p, y, x, q.lam, tol).m
    e = m @ np.array(at_x.pair, dtype=complex)
    return WeylValue.from_pair(e[0], e[1], at_x.method, at_x.truncation_radius, at_x.error_estimate)


class ExpansionTarget(str, enum.Enum):
    PPLUS_ORDER_MINUS1 = "pplus-order-1"
    PPLUS_ORDER0 = "pplus-order0"
    PMINUS_ORDER1 = "pminus-order1"
    PMINUS_ORDER2 = "pminus-order2"


def asymptotic_residual(
    p: Potential,
    y: float,
    tau: float,
    target: ExpansionTarget,
    opts: WeylOptions = DEFAULT_OPTIONS,
) -> complex:
    """Residual of a truncated expansion of X(y, ·).

    P_+: X = iλ/ψ̄ + ψ̄′/ψ̄² + …; P_−: X = iψ/λ + ψ′/λ² + …
    """
    target = ExpansionTarget(target)
    if tau < 10:  # noqa: PLR2004
        msg = f"expansion residuals need τ ≥ 10, got {tau}"
        raise ValueError(msg)
    psi = p(y)
    dpsi = p.derivative(y)

    if target in (ExpansionTarget.PPLUS_ORDER_MINUS1, ExpansionTarget.PPLUS_ORDER0):
        if psi == 0:
            msg = f"ψ({y}) = 0: the expansion at P_+ does not exist"
            raise DegenerateExpansionPoint(msg)
        q = CoverPoint(1j * tau, Sheet.PLUS)
        x = weyl_function(p, y, q, opts.without_cross_check()).finite()
        lam = q.lam
        if target is ExpansionTarget.PPLUS_ORDER_MINUS1:
            return x * (-1j * psi.conjugate()) / lam - 1
        return x - 1j * lam / psi.conjugate() - dpsi.conjugate() / psi.conjugate() ** 2

    q = CoverPoint(-1j * tau, Sheet.MINUS)
    x = weyl_function(p, y, q, opts.without_cross_check()).finite()
    lam = q.lam
    first = lam * x - 1j * psi
    if target is ExpansionTarget.PMINUS_ORDER1:
        return first
    return lam * first - dpsi
