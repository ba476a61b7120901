"""Verification suites run by ``weyl-lab verify``.

Every suite draws its random parameters up front from its own seeded generator, wraps each check in a
:class:`Case` and dispatches the cases through a thread pool. Rows come back in case order, so reports do
not depend on the number of workers.
"""
import cmath
import logging
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from weyl_lab.ahcore import (
    MobiusCoeffs,
    RationalMap,
    ah_bracket,
    canonical_bracket,
    cauchy_reproduction,
    eval_map,
    jacobi_terms,
    make_rational_map,
    mobius_apply,
    mobius_bracket,
    random_rational_map,
)
from weyl_lab.brackets import (
    TruncatedGaussian,
    ah_predicted,
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
from weyl_lab.config import SUITE_NAMES, RunConfig, canonical_suite
from weyl_lab.cover import Component, CoverPoint, Sheet, involute, left_point, right_point
from weyl_lab.dirac import (
    SIGMA1,
    constant_potential_oracle,
    free_transition_matrix,
    sigma1_conjugate,
    transition_matrix,
)
from weyl_lab.exceptions import ConfigError, DegenerateExpansionPoint
from weyl_lab.potentials import (
    CompactBump,
    ConstantPotential,
    GaussianBump,
    Mollifier,
    Potential,
    ZeroPotential,
    tabulated_sample,
)
from weyl_lab.report import CaseRow, SuiteReport
from weyl_lab.weyl import (
    ExpansionTarget,
    WeylMethod,
    WeylOptions,
    WeylValue,
    asymptotic_residual,
    boundary_ratio,
    chordal_distance,
    rotate_alpha,
    transport_weyl_value,
    unit_circle_consistent,
    weyl_alpha,
    weyl_function,
    weyl_solution,
)

logger = logging.getLogger(__name__)

ALPHAS = (0.0, math.pi / 6, math.pi / 3, math.pi / 2)
SHIFT_LADDER = (20.0, 40.0, 80.0)
PROBE_LADDER = (25.0, 50.0, 100.0)
FREE_ASYMPTOTICS_LADDER = (10.0, 20.0, 40.0, 80.0)
NEGLIGIBLE = 1e-14


@dataclass(frozen=True)
class Outcome:
    computed: complex
    expected: complex = 0j
    tol: float = 0.0
    budget: float = 0.0
    scale: Optional[float] = None
    """Defaults to max(1, |expected|)."""

    verdict: Optional[bool] = None
    """Overrides the tolerance test, for monotonicity and expected-error checks."""


@dataclass(frozen=True)
class Case:
    index: int
    invariant: str
    run: Callable[[], Outcome]
    potential: str = ""
    q: str = ""
    p: str = ""


class CaseList(list):
    """Cases of one suite, indexed in insertion order."""

    def add(self, invariant: str, run: Callable[[], Outcome], potential: str = "", q: str = "", p: str = "") -> None:
        self.append(Case(len(self), invariant, run, potential, q, p))


@dataclass
class SuiteContext:
    config: RunConfig
    rng: np.random.Generator
    potential: Potential
    label: str

    @property
    def opts(self) -> WeylOptions:
        return WeylOptions(tol=self.config.tolerances.weyl)

    def panel(self) -> List[Tuple[str, Potential]]:
        """The configured potential followed by the reference potentials."""
        out = [(self.label, self.potential)]
        out += [(label, p) for label, p in reference_potentials() if label != self.label]
        return out


def reference_potentials() -> List[Tuple[str, Potential]]:
    """Labelled potentials every randomized suite runs on besides the configured one."""
    return [
        ("constant(1+0j)", ConstantPotential(1.0)),
        ("compact(1+0j,0,2)", CompactBump(1.0, 0.0, 2.0)),
        ("gaussian(1+0j,0,1)", GaussianBump(1.0, 0.0, 1.0)),
        ("tabulated-sample", tabulated_sample()),
    ]


def point_label(q: CoverPoint) -> str:
    return f"{q.lam.real:.6g}{q.lam.imag:+.6g}j{q.sheet.value}"


def suite_rng(seed: int, name: str) -> np.random.Generator:
    """Independent generator per (seed, suite name)."""
    return np.random.default_rng([seed, zlib.crc32(name.encode("utf-8"))])


def execute(case: Case) -> CaseRow:
    """Run one case. Any exception it raises becomes a failing row with the error as detail."""
    labels = {"potential": case.potential, "q": case.q, "p": case.p}
    try:
        out = case.run()
    except Exception as e:
        logger.warning(f"case failed: case[{case.index}], invariant[{case.invariant}], error[{e}]")
        return CaseRow(
            case.index,
            case.invariant,
            False,
            abs_residual=math.inf,
            rel_residual=math.inf,
            detail=f"{type(e).__name__}: {e}",
            **labels,
        )
    computed, expected = complex(out.computed), complex(out.expected)
    abs_res = abs(computed - expected)
    scale = out.scale if out.scale is not None else max(1.0, abs(expected))
    passed = out.verdict if out.verdict is not None else abs_res <= out.tol * scale + out.budget
    if not passed:
        logger.warning(
            f"case failed: case[{case.index}], invariant[{case.invariant}], residual[{abs_res:.3e}], "
            f"tol[{out.tol:.1e}], budget[{out.budget:.3e}]"
        )
    return CaseRow(
        case.index,
        case.invariant,
        bool(passed),
        computed,
        expected,
        abs_res,
        abs_res / scale if scale > 0 else math.inf,
        out.tol * scale + out.budget,
        **labels,
    )


def _decreasing(values: Sequence[float], factor: float = 1.0) -> bool:
    """Each value at most 1/factor of its predecessor, or everything negligible."""
    if max(values) <= NEGLIGIBLE:
        return True
    return all(b * factor < a for a, b in zip(values, values[1:]))


def _draw_lam(rng: np.random.Generator, im_lo: float, im_hi: float, re_span: float = 1.0) -> complex:
    re = rng.uniform(-re_span, re_span)
    im = rng.uniform(im_lo, im_hi) * (1.0 if rng.uniform() < 0.5 else -1.0)  # noqa: PLR2004
    return complex(re, im)


def _draw_point(
    rng: np.random.Generator,
    component: Component,
    free: bool,  # noqa: FBT001
    im_lo: float = 0.5,
    im_hi: float = 2.0,
) -> CoverPoint:
    """A point of Γ_R or Γ_L; on the free field only the sheet where X = 0."""
    lam = _draw_lam(rng, im_lo, im_hi)
    if free:
        # Γ_− ∩ Γ_R has Im λ < 0, Γ_− ∩ Γ_L has Im λ > 0
        want_upper = component is Component.L
        if (lam.imag > 0) != want_upper:
            lam = lam.conjugate()
    return right_point(lam) if component is Component.R else left_point(lam)


def _draw_pair(
    rng: np.random.Generator, cq: Component, cp: Component, free: bool, min_gap: float = 0.2  # noqa: FBT001
) -> Tuple[CoverPoint, CoverPoint]:
    q = _draw_point(rng, cq, free)
    p = _draw_point(rng, cp, free)
    while abs(q.lam - p.lam) < min_gap:
        p = _draw_point(rng, cp, free)
    return q, p


def _matrix_gap(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


# ahcore-algebra


def _canonical_case(rmap: RationalMap, lam: complex, mu: complex, tol: float) -> Outcome:
    expected = ah_bracket(eval_map(rmap, lam), eval_map(rmap, mu), lam, mu)
    return Outcome(canonical_bracket(rmap, lam, mu), expected, tol)


def _jacobi_case(xs: Sequence[complex], points: Sequence[complex], tol: float) -> Outcome:
    terms = jacobi_terms(*xs, *points)
    return Outcome(sum(terms), 0j, tol, scale=max(1.0, *(abs(t) for t in terms)))


def _mobius_case(x1: complex, x2: complex, lam: complex, mu: complex, m: MobiusCoeffs, tol: float) -> Outcome:
    direct = ah_bracket(mobius_apply(x1, m), mobius_apply(x2, m), lam, mu)
    return Outcome(direct, mobius_bracket(x1, x2, lam, mu, m), tol)


def _cauchy_case(rmap: RationalMap, lam: complex, mu: complex, center: complex, radius: float) -> Outcome:
    expected = ah_bracket(eval_map(rmap, lam), eval_map(rmap, mu), lam, mu)
    return Outcome(cauchy_reproduction(rmap, lam, mu, center, radius), expected, 1e-10)


def _value_case(fn: Callable[[], complex], expected: complex, tol: float) -> Outcome:
    return Outcome(fn(), expected, tol)


def ahcore_algebra(ctx: SuiteContext) -> CaseList:
    rng, tol = ctx.rng, ctx.config.tolerances.algebra
    cases = CaseList()
    inverse = make_rational_map([0j], [-1 + 0j])
    inversion = MobiusCoeffs(0, 1, 1, 0)
    cases.add("ah-closed-form", partial(_value_case, lambda: ah_bracket(0.5, 1 / 3, 2, 3), -1 / 36, tol))
    cases.add("eval-map", partial(_value_case, lambda: eval_map(make_rational_map([1, -1], [2, 2]), 3), -0.25, tol))
    cases.add("eval-map", partial(_value_case, lambda: eval_map(inverse, 2), 0.5, tol))
    cases.add("canonical-example", partial(_value_case, lambda: canonical_bracket(inverse, 2, 3), -1 / 36, tol))
    cases.add(
        "mobius-example",
        partial(_value_case, lambda: ah_bracket(*(mobius_apply(x, inversion) for x in (0.5, 1 / 3)), 2, 3), -1.0, tol),
    )
    cases.add("jacobi-example", partial(_jacobi_case, (0.5, 1 / 3, 0.25), (2, 3, 4), tol))

    for degree in (1, 2, 3):
        rmap = random_rational_map(rng, degree)
        for _ in range(100):
            lam, mu = (complex(r * np.cos(t), r * np.sin(t)) for r, t in rng.uniform((1.5, 0), (3, 2 * np.pi), (2, 2)))
            cases.add("canonical-equivalence", partial(_canonical_case, rmap, lam, mu, tol))

    for _ in range(1000):
        xs = rng.normal(size=3) + 1j * rng.normal(size=3)
        points: List[complex] = []
        while len(points) < 3:  # noqa: PLR2004
            c = complex(*rng.uniform(-2, 2, 2))
            if all(abs(c - o) >= 0.3 for o in points):  # noqa: PLR2004
                points.append(c)
        cases.add("jacobi", partial(_jacobi_case, tuple(xs), tuple(points), tol))

    for _ in range(200):
        a, b, c, d = rng.normal(size=4) + 1j * rng.normal(size=4)
        x1, x2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        while min(abs(c * x1 + d), abs(c * x2 + d)) < 0.1 or abs(a * d - b * c) < 0.1:  # noqa: PLR2004
            c, d = rng.normal(size=2) + 1j * rng.normal(size=2)
        lam, mu = rng.normal(size=2) + 1j * rng.normal(size=2)
        cases.add("mobius-invariance", partial(_mobius_case, x1, x2, lam, mu, MobiusCoeffs(a, b, c, d), tol))

    for degree in (1, 2, 3, 1, 2, 3):
        rmap = random_rational_map(rng, degree)
        lam = 4.0 + complex(*rng.uniform(-0.7, 0.7, 2))
        cases.add("cauchy-reproduction", partial(_cauchy_case, rmap, lam, 1.5 + 1.5j, 4.0 + 0j, 2.0))
    return cases


# transition-symmetries


def _det_case(p: Potential, x: float, y: float, lam: complex, tol: float) -> Outcome:
    tm = transition_matrix(p, x, y, lam, tol)
    return Outcome(tm.det, 1 + 0j, 1e-13, budget=10 * tm.estimated_error)


def _conjugation_case(p: Potential, x: float, y: float, lam: complex, tol: float) -> Outcome:
    a = transition_matrix(p, x, y, lam, tol)
    b = transition_matrix(p, x, y, lam.conjugate(), tol)
    gap = _matrix_gap(sigma1_conjugate(a.m), b.m)
    return Outcome(gap, budget=10 * (a.estimated_error + b.estimated_error))


def _column_case(p: Potential, x: float, y: float, lam: complex, tol: float) -> Outcome:
    a = transition_matrix(p, x, y, lam, tol)
    b = transition_matrix(p, x, y, lam.conjugate(), tol)
    gap = _matrix_gap(b.column(1), SIGMA1 @ np.conj(a.column(2)))
    return Outcome(gap, budget=10 * (a.estimated_error + b.estimated_error))


def _composition_case(p: Potential, x: float, y: float, z: float, lam: complex, tol: float) -> Outcome:
    direct = transition_matrix(p, x, z, lam, tol)
    composed = transition_matrix(p, x, y, lam, tol).compose(transition_matrix(p, y, z, lam, tol))
    return Outcome(_matrix_gap(direct.m, composed.m), budget=10 * (direct.estimated_error + composed.estimated_error))


def _oracle_case(c: complex, x: float, y: float, lam: complex, tol: float) -> Outcome:
    oracle = constant_potential_oracle(c, x, y, lam)
    if c == 0:
        expected = free_transition_matrix(x, y, lam)
        numeric = transition_matrix(ZeroPotential(), x, y, lam, tol)
        return Outcome(_matrix_gap(oracle.m, expected) + _matrix_gap(numeric.m, expected), budget=tol * oracle.peak)
    numeric = transition_matrix(ConstantPotential(c), x, y, lam, tol)
    return Outcome(_matrix_gap(numeric.m, oracle.m), budget=10 * numeric.estimated_error + tol * oracle.peak)


def _free_asymptotics_case(p: Potential, x: float, y: float, tol: float) -> Outcome:
    values = []
    for tau in FREE_ASYMPTOTICS_LADDER:
        lam = 1j * tau
        tm = transition_matrix(p, y, x, lam, tol)
        gap = _matrix_gap(tm.m, free_transition_matrix(y, x, lam))
        values.append(gap * math.exp(-0.5 * tau * abs(y - x)))
    logger.debug(f"free asymptotics: values[{values}]")
    return Outcome(values[-1], verdict=_decreasing(values))


def transition_symmetries(ctx: SuiteContext) -> CaseList:
    rng, tol = ctx.rng, ctx.config.tolerances.ode
    cases = CaseList()
    for label, p in ctx.panel():
        for _ in range(20):
            x, y, z = (float(v) for v in rng.uniform(-3, 3, 3))
            lam = _draw_lam(rng, 0.25, 2.0, re_span=2.0)
            q = f"{lam:.6g}"
            cases.add("determinant", partial(_det_case, p, x, y, lam, tol), label, q)
            cases.add("sigma1-conjugation", partial(_conjugation_case, p, x, y, lam, tol), label, q)
            cases.add("column-symmetry", partial(_column_case, p, x, y, lam, tol), label, q)
            cases.add("composition", partial(_composition_case, p, x, y, z, lam, tol), label, q)

    for c in (0j, 1 + 0j, complex(*rng.uniform(-1, 1, 2)), complex(*rng.uniform(-1, 1, 2))):
        lam = _draw_lam(rng, 0.25, 2.0, re_span=2.0)
        x, y = (float(v) for v in rng.uniform(-2, 2, 2))
        cases.add("constant-oracle", partial(_oracle_case, c, x, y, lam, tol), f"constant({c:g})", f"{lam:.6g}")
    cases.add("constant-oracle", partial(_oracle_case, 1 + 0j, 1.0, 0.0, 2j, tol), "constant(1+0j)", "2j")
    bump = CompactBump(1.0, 0.0, 2.0)
    cases.add("free-asymptotics", partial(_free_asymptotics_case, bump, 1.0, -1.0, tol), "compact(1+0j,0,2)")
    return cases


# weyl-identities


def _sphere_case(value: Callable[[], WeylValue], expected: complex, tol: float) -> Outcome:
    v = value()
    return Outcome(chordal_distance(v, expected), 0j, tol)


def _pole_case(value: Callable[[], WeylValue]) -> Outcome:
    v = value()
    return Outcome(v.inverse(), 0j, verdict=v.is_pole)


def _involution_case(p: Potential, y: float, q: CoverPoint, opts: WeylOptions) -> Outcome:
    v = weyl_function(p, y, q, opts)
    w = weyl_function(p, y, involute(q), opts)
    e1, e2 = v.pair
    # X(ε_a Q) = 1/conj X(Q)
    target = WeylValue.from_pair(e2.conjugate(), e1.conjugate(), v.method)
    return Outcome(chordal_distance(w, target), 0j, 1e-8)


def riccati_tolerance(h: float, scale: float) -> float:
    """Allowed finite-difference residual: max(1e-6, h²·scale)."""
    return max(1e-6, h * h * scale)


def _riccati_case(p: Potential, y: float, q: CoverPoint, h: float = 1e-4) -> Outcome:
    """Central difference of X in y against w′ = a·w + b − c·w², in the chart where |w| ≤ 1.

    X(y ± h) is carried from X(y) along the linear flow, so the difference only sees the short-span
    integration error.
    """
    tol = 1e-12
    at = weyl_function(p, y, q, WeylOptions(tol=tol))
    e = np.array(at.pair, dtype=complex)
    moves = [transition_matrix(p, y + h, y, q.lam, tol), transition_matrix(p, y - h, y, q.lam, tol)]
    up, down = (WeylValue.from_pair(*(t.m @ e), at.method) for t in moves)
    psi, dpsi, lam = p(y), p.derivative(y), q.lam
    if at.reciprocal:
        w = at.inverse()
        fd = (up.inverse() - down.inverse()) / (2 * h)
        a, b, db, c, dc = -1j * lam, psi.conjugate(), dpsi.conjugate(), psi, dpsi
    else:
        w = at.finite()
        fd = (up.finite() - down.finite()) / (2 * h)
        a, b, db, c, dc = 1j * lam, psi, dpsi, psi.conjugate(), dpsi.conjugate()
    rhs = a * w + b - c * w * w
    second = a * rhs + db - dc * w * w - 2 * c * w * rhs
    scale = max(1.0, abs(w), abs(rhs), abs(second))
    noise = 2 * sum(t.estimated_error for t in moves) / (2 * h)
    return Outcome(fd, rhs, riccati_tolerance(h, scale), budget=noise, scale=1.0)


def _unit_circle_case(p: Potential, y: float, q: CoverPoint, opts: WeylOptions) -> Outcome:
    v = weyl_function(p, y, q, opts)
    return Outcome(v.magnitude if not v.is_pole else 0j, verdict=unit_circle_consistent(q, v))


def _method_case(p: Potential, y: float, q: CoverPoint, opts: WeylOptions) -> Outcome:
    a = weyl_function(p, y, q, opts.without_cross_check(), method=WeylMethod.RICCATI_BACKWARD)
    b = boundary_ratio(p, y, q, opts)
    return Outcome(chordal_distance(a, b), budget=10 * max(a.error_estimate, b.error_estimate) + 1e-9)


def _transport_case(p: Potential, x: float, y: float, q: CoverPoint, opts: WeylOptions) -> Outcome:
    moved = transport_weyl_value(p, x, y, q, weyl_function(p, x, q, opts), opts.tol)
    return Outcome(chordal_distance(moved, weyl_function(p, y, q, opts)), 0j, 1e-8)


def _rotation_case(p: Potential, y: float, lam: complex, alpha: float, beta: float, opts: WeylOptions) -> Outcome:
    direct = weyl_alpha(p, y, lam, alpha, "plus", opts)
    rotated = rotate_alpha(weyl_alpha(p, y, lam, beta, "plus", opts), alpha, beta)
    return Outcome(rotated, direct, 1e-8)


def _herglotz_case(p: Potential, y: float, lam: complex, alpha: float, opts: WeylOptions) -> Outcome:
    value = weyl_alpha(p, y, lam, alpha, "plus", opts)
    return Outcome(value, verdict=value.imag > 0)


def _weyl_solution_case(p: Potential, x: float, y: float, q: CoverPoint, expected: Tuple[complex, complex]) -> Outcome:
    e = weyl_solution(p, x, y, q)
    return Outcome(abs(e[0] - expected[0]) + abs(e[1] - expected[1]), 0j, 1e-9)


def _decay_case(p: Potential, q: CoverPoint, rate: float) -> Outcome:
    near = np.linalg.norm(weyl_solution(p, 4.0, 0.0, q))
    far = np.linalg.norm(weyl_solution(p, 5.0, 0.0, q))
    return Outcome(far / near, math.exp(-rate), 1e-8)


def weyl_identities(ctx: SuiteContext) -> CaseList:
    rng, opts = ctx.rng, ctx.opts
    cases = CaseList()
    zero, unit = ZeroPotential(), ConstantPotential(1.0)

    q = CoverPoint(1 + 1j, Sheet.MINUS)
    cases.add("trivial-values", partial(_sphere_case, partial(weyl_function, zero, 0.0, q, opts), 0j, 1e-10), "zero",
              point_label(q))
    q = CoverPoint(1j, Sheet.PLUS)
    cases.add("trivial-values", partial(_pole_case, partial(weyl_function, zero, 0.0, q, opts)), "zero", point_label(q))
    for alpha in ALPHAS:
        cases.add("trivial-alpha", partial(_value_case, partial(weyl_alpha, zero, 0.0, 1j, alpha, "plus", opts), 1j,
                                           1e-10), "zero", f"alpha={alpha:.6g}")
        cases.add("trivial-alpha", partial(_value_case, partial(weyl_alpha, zero, 0.0, -1j, alpha, "plus", opts), -1j,
                                           1e-10), "zero", f"alpha={alpha:.6g}")
    q = CoverPoint(-1j, Sheet.MINUS)
    cases.add("trivial-solution", partial(_weyl_solution_case, zero, 1.3, 0.0, q, (cmath.exp(-0.5j * q.lam * 1.3), 0j)),
              "zero", point_label(q))
    q = CoverPoint(2j, Sheet.PLUS)
    cases.add("constant-oracle", partial(_sphere_case, partial(weyl_function, unit, 0.0, q, opts), -1 - math.sqrt(2),
                                         1e-8), "constant(1+0j)", point_label(q))
    cases.add("constant-decay", partial(_decay_case, unit, q, math.sqrt(2)), "constant(1+0j)", point_label(q))

    for label, p in ctx.panel():
        free = isinstance(p, ZeroPotential)
        for _ in range(8):
            y = float(rng.uniform(-1.5, 1.5))
            component = Component.R if rng.uniform() < 0.5 else Component.L  # noqa: PLR2004
            q = _draw_point(rng, component, free=False)
            ql = point_label(q)
            cases.add("involution", partial(_involution_case, p, y, q, opts), label, ql)
            cases.add("unit-circle", partial(_unit_circle_case, p, y, q, opts), label, ql)
            cases.add("method-agreement", partial(_method_case, p, y, q, opts), label, ql)
            cases.add("transport", partial(_transport_case, p, y, y + float(rng.uniform(-1, 1)), q, opts), label, ql)
            if not free:
                cases.add("riccati-residual", partial(_riccati_case, p, y, q), label, ql)

        lam = complex(float(rng.uniform(-1, 1)), float(rng.uniform(0.5, 2.0)))
        for alpha in ALPHAS:
            for beta in ALPHAS:
                if alpha != beta:
                    cases.add("rotation", partial(_rotation_case, p, 0.0, lam, alpha, beta, opts), label,
                              f"{lam:.6g}", f"alpha={alpha:.6g},beta={beta:.6g}")

        quick = opts.without_cross_check()
        k = 0
        for im in np.linspace(0.5, 2.5, 10):
            for re in np.linspace(-2.0, 2.0, 10):
                lam = complex(float(re), float(im))
                cases.add("herglotz", partial(_herglotz_case, p, 0.0, lam, ALPHAS[k % len(ALPHAS)], quick), label,
                          f"{lam:.6g}")
                k += 1
    return cases


# weyl-brackets


def _bracket_case(p: Potential, y: float, q: CoverPoint, pp: CoverPoint, opts: WeylOptions, rel: float,
                  quad_tol: float) -> Outcome:
    sample = classical_bracket_weyl(p, y, q, pp, opts, quad_tol)
    xq = weyl_function(p, y, q, opts).finite()
    xp = weyl_function(p, y, pp, opts).finite()
    predicted = ah_predicted(q, pp, xq, xp)
    tol = rel if predicted != 0 else 1e-8
    return Outcome(sample.value, predicted, tol, budget=10 * sample.error_budget)


def _skew_case(p: Potential, y: float, q: CoverPoint, pp: CoverPoint, opts: WeylOptions, quad_tol: float) -> Outcome:
    forward = classical_bracket_weyl(p, y, q, pp, opts, quad_tol).value
    backward = classical_bracket_weyl(p, y, pp, q, opts, quad_tol).value
    return Outcome(forward + backward, 0j, 1e-12, scale=max(1.0, abs(forward)))


def weyl_brackets(ctx: SuiteContext) -> CaseList:
    rng, opts = ctx.rng, ctx.opts
    rel, quad_tol = ctx.config.tolerances.bracket_rel, ctx.config.tolerances.quadrature
    cases = CaseList()
    q, pp = CoverPoint(1.2j, Sheet.PLUS), CoverPoint(1.36j, Sheet.PLUS)
    cases.add("bracket-RR", partial(_bracket_case, CompactBump(1.0, 0.0, 2.0), -3.0, q, pp, opts, rel, quad_tol),
              "compact(1+0j,0,2)", point_label(q), point_label(pp))

    kinds = (("bracket-RR", Component.R, Component.R), ("bracket-LL", Component.L, Component.L),
             ("bracket-RL", Component.R, Component.L))
    for label, p in ctx.panel():
        free = isinstance(p, ZeroPotential)
        for k in range(25):
            y = float(rng.uniform(-1.5, 1.5))
            for invariant, cq, cp in kinds:
                q, pp = _draw_pair(rng, cq, cp, free)
                cases.add(invariant, partial(_bracket_case, p, y, q, pp, opts, rel, quad_tol), label,
                          point_label(q), point_label(pp))
                if k < 3 and cq is cp:  # noqa: PLR2004
                    cases.add("skew-symmetry", partial(_skew_case, p, y, q, pp, opts, quad_tol), label,
                              point_label(q), point_label(pp))
    return cases


# gradients


def _gradient_case(p: Potential, z: float, q: CoverPoint, center: float, width: float) -> Outcome:
    opts = WeylOptions(tol=1e-12)
    closed = np.array(gradient_projection(p, z, q, Mollifier(center, width), opts))
    fd = np.array(fd_gradient_oracle(p, z, q, center, width, h=1e-3, opts=opts, richardson=True))
    scale = float(np.linalg.norm(closed))
    return Outcome(float(np.linalg.norm(fd - closed)), 0j, 1e-5, budget=1e-10, scale=max(scale, 1e-300))


def _vanishing_case(p: Potential, z: float, q: CoverPoint, center: float, width: float) -> Outcome:
    fd = np.array(fd_gradient_oracle(p, z, q, center, width, h=1e-3, opts=WeylOptions(tol=1e-12)))
    return Outcome(float(np.linalg.norm(fd)), 0j, 1e-8, scale=1.0)


def _free_gradient_case(z: float, y: float, q: CoverPoint) -> Outcome:
    g = weyl_gradients(ZeroPotential(), z, q, y)
    expected = -cmath.exp(-1j * q.lam * (y - z))
    return Outcome(abs(g.d_psi - expected) + abs(g.d_psibar), 0j, 1e-9)


def gradients(ctx: SuiteContext) -> CaseList:
    rng = ctx.rng
    cases = CaseList()
    panel = ctx.panel()
    for k in range(20):
        label, p = panel[k % len(panel)]
        free = isinstance(p, ZeroPotential)
        component = Component.R if k % 2 == 0 else Component.L
        side = 1.0 if component is Component.R else -1.0
        q = _draw_point(rng, component, free, im_lo=0.75)
        z = float(rng.uniform(-1, 1))
        center = z + side * float(rng.uniform(0.3, 1.2))
        cases.add("gradient-fd", partial(_gradient_case, p, z, q, center, 0.25), label, point_label(q),
                  f"bump={center:.6g}")
        if k < 6:  # noqa: PLR2004
            center = z - side * float(rng.uniform(0.5, 1.2))
            cases.add("gradient-vanishing-side", partial(_vanishing_case, p, z, q, center, 0.25), label,
                      point_label(q), f"bump={center:.6g}")
    q = CoverPoint(-1j, Sheet.MINUS)
    for y in (0.0, 0.4, 1.1):
        cases.add("gradient-free", partial(_free_gradient_case, 0.0, y, q), "zero", point_label(q), f"y={y:.6g}")
    return cases


# wronskian-identity


def _wronskian_case(p: Potential, lam: complex, mu: complex, x0: float, x1: float,
                    coefficients: Sequence[np.ndarray]) -> Outcome:
    lhs, rhs = wronskian_identity(p, lam, mu, x0, x1, coefficients, tol=1e-12)
    return Outcome(lhs, rhs, 1e-8, scale=max(1.0, abs(lhs), abs(rhs)))


def wronskian(ctx: SuiteContext) -> CaseList:
    rng = ctx.rng
    cases = CaseList()
    panel = ctx.panel()
    for k in range(20):
        label, p = panel[k % len(panel)]
        lam = _draw_lam(rng, 0.25, 1.5)
        mu = _draw_lam(rng, 0.25, 1.5)
        while abs(mu - lam) < 0.3:  # noqa: PLR2004
            mu = _draw_lam(rng, 0.25, 1.5)
        x0 = float(rng.uniform(-2, 0))
        x1 = x0 + float(rng.uniform(0.5, 3))
        coefficients = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(4)]
        cases.add("wronskian-identity", partial(_wronskian_case, p, lam, mu, x0, x1, coefficients), label,
                  f"{lam:.6g}", f"{mu:.6g}")
    return cases


# shift-asymptotics


def _shift_ladder_case(p: Potential, x: float, y: float, pp: CoverPoint, end: str, opts: WeylOptions,
                       quad_tol: float) -> Outcome:
    values = [abs(shift_asymptotics_residual(p, x, y, pp, tau, end, opts, quad_tol)) for tau in SHIFT_LADDER]
    logger.debug(f"shift asymptotics: end[{end}], residuals[{values}]")
    return Outcome(values[-1], verdict=_decreasing(values))


def shift_asymptotics(ctx: SuiteContext) -> CaseList:
    opts, quad_tol = ctx.opts, ctx.config.tolerances.quadrature
    cases = CaseList()
    bump = CompactBump(1.0, 0.0, 2.0)
    pp = right_point(0.3 + 0.8j)
    cases.add("shift-zero-gap", partial(_value_case, partial(shift_asymptotics_residual, bump, 0.3, 0.3, pp, 20.0),
                                        0j, 0.0), "compact(1+0j,0,2)", "", point_label(pp))
    for end in ("minus", "plus"):
        cases.add("shift-convergence", partial(_shift_ladder_case, bump, 0.25, -0.25, pp, end, opts, quad_tol),
                  "compact(1+0j,0,2)", end, point_label(pp))

    if ctx.label != "compact(1+0j,0,2)":
        free = isinstance(ctx.potential, ZeroPotential)
        y = ctx.config.probe.base_point
        p_point = right_point(0.3 - 0.8j) if free else pp
        for end in ("minus",) if free else ("minus", "plus"):
            cases.add("shift-convergence", partial(_shift_ladder_case, ctx.potential, y + 0.5, y, p_point, end, opts,
                                                   quad_tol), ctx.label, end, point_label(p_point))
    return cases


# reality


def _reality_case(p: Potential, z: float, q: CoverPoint, pp: CoverPoint, opts: WeylOptions,
                  use_quadrature: bool) -> Outcome:  # noqa: FBT001
    residual = reality_relation_residual(p, z, q, pp, use_quadrature, opts)
    vq, vp = weyl_function(p, z, q, opts), weyl_function(p, z, pp, opts)
    scale = 1.0
    denom = (vq.magnitude * vp.magnitude) ** 2
    if not (vq.is_pole or vp.is_pole) and denom > 0:
        # size of the conjugated term
        scale = max(1.0, abs(ah_predicted(q, pp, vq.finite(), vp.finite())) / denom)
    return Outcome(residual, 0j, 1e-6 if use_quadrature else 1e-8, scale=scale)


def _reality_swap_case(p: Potential, z: float, q: CoverPoint, pp: CoverPoint, opts: WeylOptions) -> Outcome:
    forward = reality_relation_residual(p, z, q, pp, opts=opts)
    backward = reality_relation_residual(p, z, pp, q, opts=opts)
    return Outcome(forward + backward, 0j, 1e-10)


def reality(ctx: SuiteContext) -> CaseList:
    rng, opts = ctx.rng, ctx.opts
    cases = CaseList()
    for label, p in ctx.panel():
        free = isinstance(p, ZeroPotential)
        for k in range(10):
            z = float(rng.uniform(-1, 1))
            q, pp = _draw_pair(rng, Component.R, Component.R, free)
            ql, pl = point_label(q), point_label(pp)
            cases.add("reality", partial(_reality_case, p, z, q, pp, opts, False), label, ql, pl)
            if k < 2 and not free:  # noqa: PLR2004
                cases.add("reality-quadrature", partial(_reality_case, p, z, q, pp, opts, True), label, ql, pl)
            if k < 2:  # noqa: PLR2004
                cases.add("reality-swap", partial(_reality_swap_case, p, z, q, pp, opts), label, ql, pl)
    return cases


# delta-recovery


def _recovery_case(p: Potential, y: float, tau: float, tol: float) -> Outcome:
    psi_hat, _ = recover_fields(p, y, tau)
    return Outcome(psi_hat, p(y), tol)


def _conjugate_case(p: Potential, y: float, tau: float, tol: float) -> Outcome:
    return Outcome(recover_fields(p, y, tau).conjugate_mismatch, 0j, tol)


def _recovery_ladder_case(p: Potential, y: float, factor: float) -> Outcome:
    errors = [abs(recover_fields(p, y, tau).psi_hat - p(y)) for tau in SHIFT_LADDER]
    logger.debug(f"field recovery: y[{y}], errors[{errors}]")
    return Outcome(errors[-1], verdict=_decreasing(errors, factor))


def _probe_rate_case(p: Potential, z: float, f: TruncatedGaussian, side: str) -> Outcome:
    target = 1j * f(z)
    errors = [abs(delta_limit_probe(p, z, f, tau, side) - target) for tau in PROBE_LADDER]
    rates = [math.log2(a / b) for a, b in zip(errors, errors[1:]) if a > 0 and b > 0]
    rate = sum(rates) / len(rates) if rates else math.inf
    logger.debug(f"delta probe: side[{side}], errors[{errors}], rate[{rate:.3f}]")
    return Outcome(errors[-1], verdict=max(errors) <= NEGLIGIBLE or rate >= 0.8)  # noqa: PLR2004


def _two_sided_case(p: Potential, z: float, f: TruncatedGaussian) -> Outcome:
    target = 2j * f(z)
    errors = [
        abs(delta_limit_probe(p, z, f, tau, "right") + delta_limit_probe(p, z, f, tau, "left") - target)
        for tau in PROBE_LADDER
    ]
    return Outcome(errors[-1], verdict=_decreasing(errors))


def _separated_case(p: Potential, z: float, gap: float, tau: float) -> Outcome:
    f = TruncatedGaussian(z - gap - 8 * 0.5, 0.5)
    value = delta_limit_probe(p, z, f, tau, "right")
    bound = math.exp(-tau * gap) * tau * math.sqrt(2 * math.pi) * f.width * 4
    return Outcome(abs(value), 0j, verdict=abs(value) <= bound)


def _linearity_case(p: Potential, z: float, f: TruncatedGaussian, tau: float) -> Outcome:
    once = delta_limit_probe(p, z, f, tau, "right")
    twice = delta_limit_probe(p, z, f.scaled(2.0), tau, "right")
    return Outcome(twice, 2 * once, 1e-9)


def _psi_psi_case(p: Potential, z: float, f: TruncatedGaussian) -> Outcome:
    values = [abs(psi_psi_probe(p, z, f, tau)) for tau in PROBE_LADDER]
    return Outcome(values[-1], verdict=_decreasing(values, 1.5))


def delta_recovery(ctx: SuiteContext) -> CaseList:
    cases = CaseList()
    unit, bump = ConstantPotential(1.0), GaussianBump(1.0, 0.0, 1.0)
    cases.add("field-recovery", partial(_recovery_case, unit, 0.0, 100.0, 2e-4), "constant(1+0j)", "tau=100")
    cases.add("conjugate-consistency", partial(_conjugate_case, unit, 0.0, 100.0, 1e-4), "constant(1+0j)", "tau=100")
    cases.add("field-recovery-convergence", partial(_recovery_ladder_case, bump, 0.0, 1.8), "gaussian(1+0j,0,1)")
    cases.add("field-recovery-convergence", partial(_recovery_ladder_case, ctx.potential, ctx.config.probe.base_point,
                                                    1.8), ctx.label)

    width = ctx.config.probe.test_width
    probes = [("constant(1+0j)", unit), ("gaussian(1+0j,0,1)", bump)]
    z = ctx.config.probe.base_point
    if ctx.label not in dict(probes) and abs(ctx.potential(z)) > 1e-3:  # noqa: PLR2004
        probes.append((ctx.label, ctx.potential))
    for label, p in probes:
        base = 0.0 if p is unit or p is bump else z
        f = TruncatedGaussian(base, width)
        for side in ("right", "left"):
            cases.add("delta-probe", partial(_probe_rate_case, p, base, f, side), label, side)
        cases.add("delta-two-sided", partial(_two_sided_case, p, base, f), label)
        cases.add("delta-separated", partial(_separated_case, p, base, 0.5, 50.0), label, "tau=50")
        cases.add("delta-linearity", partial(_linearity_case, p, base, f, 50.0), label, "tau=50")
        cases.add("psi-psi-probe", partial(_psi_psi_case, p, base, f), label)
    return cases


# asymptotic-series


def _expansion_ladder_case(p: Potential, y: float, target: ExpansionTarget, factor: float) -> Outcome:
    values = [abs(asymptotic_residual(p, y, tau, target)) for tau in SHIFT_LADDER]
    logger.debug(f"expansion: target[{target.value}], y[{y}], residuals[{values}]")
    return Outcome(values[-1], verdict=_decreasing(values, factor))


def _degenerate_case(p: Potential, y: float) -> Outcome:
    try:
        value = asymptotic_residual(p, y, 20.0, ExpansionTarget.PPLUS_ORDER_MINUS1)
    except DegenerateExpansionPoint:
        return Outcome(0j, verdict=True)
    return Outcome(value, verdict=False)


def asymptotic_series(ctx: SuiteContext) -> CaseList:
    cases = CaseList()
    zero, unit, bump = ZeroPotential(), ConstantPotential(1.0), GaussianBump(1.0, 0.0, 1.0)
    cases.add("expansion-trivial", partial(_value_case, partial(asymptotic_residual, zero, 0.0, 20.0,
                                                                ExpansionTarget.PMINUS_ORDER1), 0j, 0.0), "zero")
    cases.add("expansion-degenerate", partial(_degenerate_case, zero, 0.0), "zero")
    cases.add("expansion-constant", partial(_value_case, partial(asymptotic_residual, unit, 0.0, 100.0,
                                                                 ExpansionTarget.PMINUS_ORDER1), -1e-4j, 1e-6),
              "constant(1+0j)", "tau=100")
    cases.add("expansion-convergence", partial(_expansion_ladder_case, bump, 0.0, ExpansionTarget.PMINUS_ORDER1, 1.8),
              "gaussian(1+0j,0,1)", ExpansionTarget.PMINUS_ORDER1.value)
    for target in (ExpansionTarget.PMINUS_ORDER2, ExpansionTarget.PPLUS_ORDER_MINUS1, ExpansionTarget.PPLUS_ORDER0):
        cases.add("expansion-convergence", partial(_expansion_ladder_case, bump, 0.5, target, 1.5),
                  "gaussian(1+0j,0,1)", target.value)
    y = ctx.config.probe.base_point
    cases.add("expansion-convergence", partial(_expansion_ladder_case, ctx.potential, y, ExpansionTarget.PMINUS_ORDER1,
                                               1.5), ctx.label, ExpansionTarget.PMINUS_ORDER1.value)
    return cases


SUITES: Dict[str, Callable[[SuiteContext], CaseList]] = {
    "ahcore-algebra": ahcore_algebra,
    "transition-symmetries": transition_symmetries,
    "weyl-identities": weyl_identities,
    "theorem41": weyl_brackets,
    "gradients": gradients,
    "lemma42": wronskian,
    "lemma45": shift_asymptotics,
    "reality": reality,
    "theorem44-delta": delta_recovery,
    "asymptotic-series": asymptotic_series,
}
assert tuple(SUITES) == SUITE_NAMES  # noqa: S101


def run_suite(name: str, config: RunConfig) -> SuiteReport:
    """Run one suite by its canonical name or a descriptive alias."""
    name = canonical_suite(name)
    if name not in SUITES:
        msg = f"unknown suite {name!r}"
        raise ConfigError(msg)
    started = time.perf_counter()
    ctx = SuiteContext(config, suite_rng(config.seed, name), config.potential.build(), config.potential.label)
    cases = SUITES[name](ctx)
    logger.debug(f"suite: name[{name}], cases[{len(cases)}], workers[{config.workers}]")
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        rows = list(pool.map(execute, cases))
    report = SuiteReport(name, rows, time.perf_counter() - started)
    logger.info(
        f"suite {name}: {report.passes}/{report.cases} passed, max residual {report.max_abs_residual:.3e}, "
        f"{report.wall_time:.2f}s"
    )
    return report
