"""Functional gradients of Weyl functions and their classical Poisson brackets."""
from __future__ import annotations

import cmath
import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad_vec

from weyl_lab.cover import Component, CoverPoint, Sheet, classify, involute
from weyl_lab.dirac import TransitionSolution, bilinear
from weyl_lab.exceptions import CoincidentPoints, NotNormalizable, PoleEvaluation, QuadratureFailure
from weyl_lab.potentials import Mollifier, Potential
from weyl_lab.weyl import (
    DEFAULT_OPTIONS,
    WeylOptions,
    WeylSolution,
    WeylValue,
    chordal_distance,
    weyl_function,
)

logger = logging.getLogger(__name__)

QUAD_TOL = 1e-10
QUAD_LIMIT = 2000


class BracketCase(str, enum.Enum):
    RR = "RR"
    LL = "LL"
    RL = "RL"


@dataclass(frozen=True)
class GradientPair:
    d_psi: complex
    d_psibar: complex
    base_point: float
    eval_point: float
    q: CoverPoint


@dataclass(frozen=True)
class BracketSample:
    value: complex
    quadrature_error: float
    truncation_error: float
    case: BracketCase

    @property
    def error_budget(self) -> float:
        return self.quadrature_error + self.truncation_error


@dataclass(frozen=True)
class TruncatedGaussian:
    """Test function: a Gaussian cut at ``cutoff`` widths, shifted to vanish there and rescaled to peak at amplitude."""

    center: float
    width: float = 0.5
    amplitude: float = 1.0
    cutoff: float = 8.0

    def __call__(self, x: float) -> float:
        s = (x - self.center) / self.width
        if abs(s) >= self.cutoff:
            return 0.0
        floor = math.exp(-0.5 * self.cutoff**2)
        return self.amplitude * (math.exp(-0.5 * s * s) - floor) / (1.0 - floor)

    @property
    def support(self) -> Tuple[float, float]:
        half = self.cutoff * self.width
        return (self.center - half, self.center + half)

    def scaled(self, factor: float) -> "TruncatedGaussian":
        return TruncatedGaussian(self.center, self.width, self.amplitude * factor, self.cutoff)


class FieldRecovery(NamedTuple):
    psi_hat: complex
    psibar_hat: complex

    @property
    def conjugate_mismatch(self) -> float:
        return abs(self.psi_hat - self.psibar_hat.conjugate())


def bracket_case(q: CoverPoint, p: CoverPoint) -> BracketCase:
    """RR or LL when both points lie in the same component, RL otherwise."""
    cq, cp = classify(q), classify(p)
    if cq is not cp:
        return BracketCase.RL
    return BracketCase.RR if cq is Component.R else BracketCase.LL


def _integrate(
    f: Callable[[float], np.ndarray], a: float, b: float, points: Sequence[float] = (), tol: float = QUAD_TOL
) -> Tuple[np.ndarray, float]:
    """Adaptive Gauss–Kronrod over [a, b] for a real vector-valued integrand, split at ``points``."""
    if b <= a:
        return np.zeros_like(f(a)), 0.0
    inner = sorted(x for x in points if a < x < b)
    res, err, info = quad_vec(
        f, a, b, epsabs=tol * 1e-3, epsrel=tol, limit=QUAD_LIMIT, points=inner or None, full_output=True
    )
    if info.status == 1:
        msg = f"quadrature on [{a}, {b}] did not converge: error estimate {err:.3e}"
        raise QuadratureFailure(msg)
    return np.asarray(res), float(err)


def _as_real(values: Sequence[complex]) -> np.ndarray:
    out = np.empty(2 * len(values))
    for k, v in enumerate(values):
        out[2 * k] = v.real
        out[2 * k + 1] = v.imag
    return out


def _as_complex(values: np.ndarray) -> List[complex]:
    return [complex(values[2 * k], values[2 * k + 1]) for k in range(len(values) // 2)]


def gradient_from_solution(sol: WeylSolution, y: float) -> Tuple[complex, complex]:
    """(δX(z,Q)/δψ(y), δX(z,Q)/δψ̄(y)) with z the base point of ``sol``."""
    if sol.sign * (y - sol.y) < 0:
        return 0j, 0j
    e = sol(y)
    e1, e2 = complex(e[0]), complex(e[1])
    if sol.q.component is Component.R:
        return -(e1 * e1), e2 * e2
    return e1 * e1, -(e2 * e2)


def weyl_gradients(
    p: Potential, z: float, q: CoverPoint, y: float, opts: WeylOptions = DEFAULT_OPTIONS
) -> GradientPair:
    """Gradients of X(z, Q) at y.

    −e1², e2² on y ≥ z for Γ_R; e1², −e2² on y ≤ z for Γ_L; zero on the other side.
    """
    sign = 1.0 if q.component is Component.R else -1.0
    if sign * (y - z) < 0:
        return GradientPair(0j, 0j, z, y, q)
    sol = WeylSolution(p, z, q, reach=abs(y - z), opts=opts)
    d_psi, d_psibar = gradient_from_solution(sol, y)
    return GradientPair(d_psi, d_psibar, z, y, q)


def gradient_projection(
    p: Potential, z: float, q: CoverPoint, phi: Mollifier, opts: WeylOptions = DEFAULT_OPTIONS
) -> Tuple[complex, complex]:
    """(∫φ·δX/δψ, ∫φ·δX/δψ̄) from the closed-form gradients."""
    lo, hi = phi.support
    if q.component is Component.R:
        lo = max(lo, z)
    else:
        hi = min(hi, z)
    if hi <= lo:
        return 0j, 0j
    reach = max(abs(hi - z), abs(lo - z))
    sol = WeylSolution(p, z, q, reach=reach, opts=opts)

    def integrand(y: float) -> np.ndarray:
        d_psi, d_psibar = gradient_from_solution(sol, y)
        w = phi(y)
        return _as_real([w * d_psi, w * d_psibar])

    res, _ = _integrate(integrand, lo, hi, tol=opts.tol)
    a, b = _as_complex(res)
    return a, b


def fd_gradient_oracle(
    p: Potential,
    z: float,
    q: CoverPoint,
    bump_center: float,
    bump_width: float,
    h: float = 1e-3,
    opts: Optional[WeylOptions] = None,
    richardson: bool = False,  # noqa: FBT001, FBT002
) -> Tuple[complex, complex]:
    """Central differences of X(z, Q) along ψ → ψ + hφ and ψ → ψ + ihφ, φ the unit mollifier.

    Returns the pair (∫φ·δX/δψ, ∫φ·δX/δψ̄) recovered from the two directional derivatives.
    """
    if not 1e-6 <= h <= 1e-2:  # noqa: PLR2004
        msg = f"finite-difference step must lie in [1e-6, 1e-2], got {h}"
        raise ValueError(msg)
    opts = (opts or WeylOptions(tol=1e-12)).without_cross_check()
    phi = Mollifier(bump_center, bump_width)

    def x_of(coefficient: complex) -> complex:
        return weyl_function(p.perturbed(phi, coefficient), z, q, opts).finite()

    def directional(step: float) -> Tuple[complex, complex]:
        d_real = (x_of(step) - x_of(-step)) / (2 * step)
        d_imag = (x_of(1j * step) - x_of(-1j * step)) / (2 * step)
        return (d_real - 1j * d_imag) / 2, (d_real + 1j * d_imag) / 2

    a, b = directional(h)
    if richardson:
        a_half, b_half = directional(h / 2)
        a, b = (4 * a_half - a) / 3, (4 * b_half - b) / 3
    logger.debug(f"fd gradient: z[{z}], Q[{q.lam}, {q.sheet.value}], h[{h}], d_psi[{a}], d_psibar[{b}]")
    return a, b


def ah_predicted(q: CoverPoint, p: CoverPoint, xq: complex, xp: complex) -> complex:
    """+2(xQ − xP)²/(λQ − λP) on Γ_R × Γ_R, −2(…) on Γ_L × Γ_L, 0 across components."""
    case = bracket_case(q, p)
    if case is BracketCase.RL:
        return 0j
    if q.lam == p.lam:
        msg = f"coincident spectral parameters λ = {q.lam} in a {case.value} bracket"
        raise CoincidentPoints(msg)
    sign = 2.0 if case is BracketCase.RR else -2.0
    return sign * (xq - xp) ** 2 / (q.lam - p.lam)


def _predicted_from_values(q: CoverPoint, p: CoverPoint, vq: WeylValue, vp: WeylValue) -> complex:
    # coincident sphere values, X = ∞ included, give a vanishing bracket
    if bracket_case(q, p) is BracketCase.RL or chordal_distance(vq, vp) == 0:
        return 0j
    try:
        return ah_predicted(q, p, vq.finite(), vp.finite())
    except NotNormalizable as e:
        msg = f"bracket prediction needs finite Weyl values: {e}"
        raise PoleEvaluation(msg) from e


def _bracket_window(
    q: CoverPoint, y_q: float, p: CoverPoint, y_p: float, tol: float
) -> Tuple[float, float, float]:
    """Integration window on the common supported side and the decay rate of the integrand."""
    rate = abs(q.lam.imag) + abs(p.lam.imag)
    length = math.log(1.0 / tol) / rate + 1.0
    if q.component is Component.R:
        start = max(y_q, y_p)
        return start, start + length, rate
    start = min(y_q, y_p)
    return start - length, start, rate


def _quadrature_bracket(
    sol_q: WeylSolution, sol_p: WeylSolution, lo: float, hi: float, rate: float, tol: float
) -> BracketSample:
    edges = list(sol_q.potential.effective_support)

    def integrand(xi: float) -> np.ndarray:
        a_psi, a_psibar = gradient_from_solution(sol_q, xi)
        b_psi, b_psibar = gradient_from_solution(sol_p, xi)
        return _as_real([a_psibar * b_psi - a_psi * b_psibar])

    res, err = _integrate(integrand, lo, hi, points=edges, tol=tol)
    value = 2j * _as_complex(res)[0]
    far = hi if sol_q.q.component is Component.R else lo
    tail = 2.0 * float(np.linalg.norm(integrand(far))) / rate
    case = BracketCase.RR if sol_q.q.component is Component.R else BracketCase.LL
    logger.debug(f"quadrature bracket: window[{lo}, {hi}], value[{value}], err[{err:.2e}], tail[{tail:.2e}]")
    return BracketSample(complex(value), 2.0 * err, tail, case)


def cross_bracket(
    p: Potential,
    y_q: float,
    q: CoverPoint,
    y_p: float,
    pp: CoverPoint,
    opts: WeylOptions = DEFAULT_OPTIONS,
    quad_tol: float = QUAD_TOL,
) -> BracketSample:
    """{X(y_q, Q), X(y_p, P)} by quadrature of the classical bracket with gradients based at y_q and y_p."""
    case = bracket_case(q, pp)
    if case is BracketCase.RL:
        return BracketSample(0j, 0.0, 0.0, case)
    lo, hi, rate = _bracket_window(q, y_q, pp, y_p, quad_tol)
    far = hi if case is BracketCase.RR else lo
    sol_q = WeylSolution(p, y_q, q, reach=abs(far - y_q), opts=opts)
    sol_p = WeylSolution(p, y_p, pp, reach=abs(far - y_p), opts=opts)
    return _quadrature_bracket(sol_q, sol_p, lo, hi, rate, quad_tol)


def classical_bracket_weyl(
    p: Potential,
    y: float,
    q: CoverPoint,
    pp: CoverPoint,
    opts: WeylOptions = DEFAULT_OPTIONS,
    quad_tol: float = QUAD_TOL,
) -> BracketSample:
    """2i∫(δX(y,Q)/δψ̄·δX(y,P)/δψ − δX(y,Q)/δψ·δX(y,P)/δψ̄) over the common supported side."""
    return cross_bracket(p, y, q, y, pp, opts, quad_tol)


def recover_fields(p: Potential, y: float, tau: float, opts: WeylOptions = DEFAULT_OPTIONS) -> FieldRecovery:
    """ψ ≈ −iλX(y, Q−) at Q− = (−iτ, −) and ψ̄ ≈ iλ/X(y, Q+) at Q+ = (iτ, +)."""
    if tau < 10:  # noqa: PLR2004
        msg = f"field recovery needs τ ≥ 10, got {tau}"
        raise ValueError(msg)
    opts = opts.without_cross_check()
    q_minus = CoverPoint(-1j * tau, Sheet.MINUS)
    q_plus = CoverPoint(1j * tau, Sheet.PLUS)
    psi_hat = -1j * q_minus.lam * weyl_function(p, y, q_minus, opts).finite()
    psibar_hat = 1j * q_plus.lam * weyl_function(p, y, q_plus, opts).inverse()
    return FieldRecovery(complex(psi_hat), complex(psibar_hat))


def _finite_nonzero(value: WeylValue, where: str) -> complex:
    if value.is_pole or (not value.reciprocal and value.coordinate == 0):
        msg = f"degenerate Weyl value {value.value} at {where}"
        raise PoleEvaluation(msg)
    return value.finite()


def _kernel_integral(f: TruncatedGaussian, z: float, lam_p: complex, lo: float, hi: float, tol: float) -> complex:
    def integrand(y: float) -> np.ndarray:
        return _as_real([f(y) * cmath.exp(-1j * lam_p * (z - y))])

    res, _ = _integrate(integrand, lo, hi, tol=tol)
    return _as_complex(res)[0]


def delta_limit_probe(
    p: Potential,
    z: float,
    f: TruncatedGaussian,
    tau: float,
    side: str = "right",
    opts: WeylOptions = DEFAULT_OPTIONS,
) -> complex:
    """−(λQλP/X²(z,Q))·{X(z,Q),X(z,P)}·∫f(y)e^{−iλP(z−y)}dy with P = ε_a Q, tending to i·f(z).

    side "right": Q = (iτ, +) ∈ Γ_R, y ≤ z. side "left": Q = (−iτ, +) ∈ Γ_L, y ≥ z.
    """
    if side not in ("right", "left"):
        msg = f"side must be 'right' or 'left', got {side!r}"
        raise ValueError(msg)
    q = CoverPoint(1j * tau if side == "right" else -1j * tau, Sheet.PLUS)
    opts = opts.without_cross_check()
    pp = involute(q)
    xq = _finite_nonzero(weyl_function(p, z, q, opts), f"X({z}, {q})")
    xp = weyl_function(p, z, pp, opts)
    if xp.is_pole:
        msg = f"X({z}, {pp}) is infinite"
        raise PoleEvaluation(msg)
    pred = ah_predicted(q, pp, xq, xp.finite())

    lo, hi = f.support
    if side == "right":
        hi = min(hi, z)
    else:
        lo = max(lo, z)
    integral = _kernel_integral(f, z, pp.lam, lo, hi, QUAD_TOL)
    value = -(q.lam * pp.lam / xq**2) * pred * integral
    logger.debug(f"delta probe: side[{side}], tau[{tau}], value[{value}]")
    return complex(value)


def psi_psi_probe(
    p: Potential, z: float, f: TruncatedGaussian, tau: float, opts: WeylOptions = DEFAULT_OPTIONS
) -> complex:
    """−λQλP·{X(z,Q),X(z,P)}·∫_{y≤z} f(y)e^{−iλP(z−y)}dy, tending to 0.

    Q = (−iτ, −) and P = (−2iτ, −).
    """
    q = CoverPoint(-1j * tau, Sheet.MINUS)
    pp = CoverPoint(-2j * tau, Sheet.MINUS)
    opts = opts.without_cross_check()
    xq = weyl_function(p, z, q, opts).finite()
    xp = weyl_function(p, z, pp, opts).finite()
    lo, hi = f.support
    integral = _kernel_integral(f, z, pp.lam, lo, min(hi, z), QUAD_TOL)
    return complex(-q.lam * pp.lam * ah_predicted(q, pp, xq, xp) * integral)


def shift_asymptotics_residual(
    p: Potential,
    x: float,
    y: float,
    pp: CoverPoint,
    tau: float,
    end: str = "minus",
    opts: WeylOptions = DEFAULT_OPTIONS,
    quad_tol: float = QUAD_TOL,
) -> complex:
    """Normalized difference between {A(y,Q), X(x,P)} and its shifted form s·{A(x,Q), X(x,P)}.

    end "minus": Q = (−iτ, −), A = X, s = e^{−iλ(Q)(x−y)}.
    end "plus":  Q = (iτ, +),  A = 1/X, s = e^{+iλ(Q)(x−y)}.
    """
    if x == y:
        return 0j
    if x < y:
        msg = f"shift asymptotics needs x > y, got x={x}, y={y}"
        raise ValueError(msg)
    if classify(pp) is not Component.R:
        msg = f"P = {pp} must lie in Γ_R"
        raise ValueError(msg)
    if end not in ("minus", "plus"):
        msg = f"end must be 'minus' or 'plus', got {end!r}"
        raise ValueError(msg)

    q = CoverPoint(-1j * tau, Sheet.MINUS) if end == "minus" else CoverPoint(1j * tau, Sheet.PLUS)
    lo, hi, rate = _bracket_window(q, y, pp, x, quad_tol)
    sol_qy = WeylSolution(p, y, q, reach=hi - y, opts=opts)
    sol_qx = WeylSolution(p, x, q, reach=hi - x, opts=opts)
    sol_px = WeylSolution(p, x, pp, reach=hi - x, opts=opts)
    shifted = _quadrature_bracket(sol_qy, sol_px, lo, hi, rate, quad_tol).value
    same = _quadrature_bracket(sol_qx, sol_px, lo, hi, rate, quad_tol).value

    if end == "minus":
        factor = cmath.exp(-1j * q.lam * (x - y))
    else:
        # {1/X, B} = −{X, B}/X²
        shifted = -shifted / sol_qy.x_value**2
        same = -same / sol_qx.x_value**2
        factor = cmath.exp(1j * q.lam * (x - y))
    target = factor * same
    if target == 0:
        return 0j if shifted == 0 else complex(math.inf)
    return complex((shifted - target) / abs(target))


def reality_relation_residual(
    p: Potential,
    z: float,
    q: CoverPoint,
    pp: CoverPoint,
    use_quadrature: bool = False,  # noqa: FBT001, FBT002
    opts: WeylOptions = DEFAULT_OPTIONS,
) -> complex:
    """{X(ε_aQ), X(ε_aP)} − conj({X(Q), X(P)})/conj(X(Q)²X(P)²) at base point z, for Q, P ∈ Γ_R."""
    if classify(q) is not Component.R or classify(pp) is not Component.R:
        msg = f"reality relation needs Q, P in Γ_R, got {q} and {pp}"
        raise ValueError(msg)
    eq, ep = involute(q), involute(pp)
    opts = opts.without_cross_check()
    vq, vp = weyl_function(p, z, q, opts), weyl_function(p, z, pp, opts)

    if use_quadrature:
        inverted = classical_bracket_weyl(p, z, eq, ep, opts).value
        direct = classical_bracket_weyl(p, z, q, pp, opts).value
    else:
        inverted = _predicted_from_values(eq, ep, weyl_function(p, z, eq, opts), weyl_function(p, z, ep, opts))
        direct = _predicted_from_values(q, pp, vq, vp)

    if direct == 0:
        return inverted
    xq = _finite_nonzero(vq, f"X({z}, {q})")
    xp = _finite_nonzero(vp, f"X({z}, {pp})")
    return complex(inverted - direct.conjugate() / (xq**2 * xp**2).conjugate())


def wronskian_identity(
    p: Potential,
    lam: complex,
    mu: complex,
    x0: float,
    x1: float,
    coefficients: Sequence[Sequence[complex]],
    tol: float = 1e-10,
) -> Tuple[complex, complex]:
    """Both sides of the bilinear Wronskian identity on [x0, x1].

    f♥, f♠ are the solutions M(x, x0, λ)·a, M(x, x0, λ)·b and g♥, g♠ are M(x, x0, μ)·c, M(x, x0, μ)·d
    for     ``coefficients`` = (a, b, c, d). Returns (∫(f1♥f1♠g2♠g2♥ − f2♠f2♥g1♥g1♠)dx,
    [(f♥ᵀJg♥)(f♠ᵀJg♠)]_{x0}^{x1}/(i(μ − λ))).
    """
    if lam == mu:
        msg = f"the Wronskian identity needs λ ≠ μ, got {lam}"
        raise CoincidentPoints(msg)
    a, b, c, d = (np.asarray(v, dtype=complex) for v in coefficients)
    m_lam = TransitionSolution(p, x0, x1, lam, tol)
    m_mu = TransitionSolution(p, x0, x1, mu, tol)

    def quadruple(x: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        ml, mm = m_lam(x), m_mu(x)
        return ml @ a, ml @ b, mm @ c, mm @ d

    def integrand(x: float) -> np.ndarray:
        fh, fs, gh, gs = quadruple(x)
        return _as_real([fh[0] * fs[0] * gs[1] * gh[1] - fs[1] * fh[1] * gh[0] * gs[0]])

    def boundary(x: float) -> complex:
        fh, fs, gh, gs = quadruple(x)
        return bilinear(fh, gh) * bilinear(fs, gs)

    res, _ = _integrate(integrand, x0, x1, points=p.effective_support, tol=tol)
    lhs = _as_complex(res)[0]
    rhs = (boundary(x1) - boundary(x0)) / (1j * (mu - lam))
    return complex(lhs), complex(rhs)
