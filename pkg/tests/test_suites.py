"""Test the verification suites and the case runner."""
from functools import partial

import pytest

from tests.tools.fake_handlers import FakeLogHandler
from weyl_lab.config import SUITE_ALIASES, SUITE_NAMES, RunConfig
from weyl_lab.cover import CoverPoint, Sheet
from weyl_lab.exceptions import ConfigError, PoleEvaluation
from weyl_lab.potentials import GaussianBump, tabulated_sample
from weyl_lab.suites import (
    SUITES,
    Case,
    Outcome,
    SuiteContext,
    _decreasing,
    _riccati_case,
    execute,
    reference_potentials,
    riccati_tolerance,
    run_suite,
    suite_rng,
    weyl_brackets,
)


@pytest.fixture
def log_handler():
    handler = FakeLogHandler().attach()
    yield handler
    handler.detach()


def test_ahcore_algebra_suite() -> None:
    """Test that the algebra suite passes at its tolerance."""
    report = run_suite("ahcore-algebra", RunConfig(suites=["ahcore-algebra"]))
    assert report.passed
    assert report.cases > 1000
    assert report.max_rel_residual <= 1e-10


def test_suite_determinism() -> None:
    """Test that seed and worker count never change the rows."""
    base = run_suite("ahcore-algebra", RunConfig(seed=5))
    again = run_suite("ahcore-algebra", RunConfig(seed=5))
    threaded = run_suite("ahcore-algebra", RunConfig(seed=5, workers=4))
    other = run_suite("ahcore-algebra", RunConfig(seed=6))
    assert base.rows == again.rows == threaded.rows
    assert base.rows != other.rows


def test_suite_rng_streams() -> None:
    """Test that suites draw from independent seeded streams."""
    assert suite_rng(0, "reality").random() == suite_rng(0, "reality").random()
    assert suite_rng(0, "reality").random() != suite_rng(0, "gradients").random()


def test_unknown_suite() -> None:
    """Test that an unknown suite raises ConfigError."""
    with pytest.raises(ConfigError):
        run_suite("no-such-suite", RunConfig())


def test_suite_registry() -> None:
    """Test that every suite is registered."""
    assert set(SUITES) == set(RunConfig().suites)


def test_execute_pass_and_fail(log_handler: FakeLogHandler) -> None:
    """Test the tolerance test and the failure logging."""
    ok = execute(Case(0, "close", lambda: Outcome(1.0 + 1e-9, 1.0, tol=1e-6)))
    assert ok.passed
    assert ok.abs_residual == pytest.approx(1e-9)
    assert log_handler.counter.warnings == 0

    bad = execute(Case(1, "far", lambda: Outcome(2.0, 1.0, tol=1e-6), potential="zero"))
    assert not bad.passed
    assert bad.potential == "zero"
    assert log_handler.counter.warnings == 1
    assert "far" in log_handler.counter.messages[-1]


def test_execute_verdict_and_scale() -> None:
    """Test the verdict override and an explicit residual scale."""
    assert execute(Case(0, "ladder", lambda: Outcome(5.0, verdict=True))).passed
    assert not execute(Case(1, "ladder", lambda: Outcome(0.0, verdict=False))).passed
    assert not execute(Case(2, "scaled", lambda: Outcome(1e-3, 0.0, tol=1e-2, scale=1e-2))).passed
    assert execute(Case(3, "scaled", lambda: Outcome(1e-3, 0.0, tol=1e-2, scale=1.0))).passed


def test_execute_records_errors(log_handler: FakeLogHandler) -> None:
    """Test that a raising case becomes a failing row with the error detail."""

    def boom() -> Outcome:
        msg = "X has a pole"
        raise PoleEvaluation(msg)

    row = execute(Case(4, "pole", boom))
    assert not row.passed
    assert row.detail == "PoleEvaluation: X has a pole"
    assert log_handler.counter.warnings == 1


def test_decreasing() -> None:
    """Test the monotonicity helper."""
    assert _decreasing([1.0, 0.5, 0.2])
    assert not _decreasing([1.0, 0.5, 0.6])
    assert not _decreasing([1.0, 0.6, 0.3], factor=2.0)
    assert _decreasing([1e-16, 1e-15, 0.0])


def test_reference_panel() -> None:
    """Test that the configured potential leads the panel without duplicates."""
    config = RunConfig(potential={"kind": "constant", "amplitude": [1.0, 0.0]})
    ctx = SuiteContext(config, suite_rng(0, "x"), config.potential.build(), config.potential.label)
    labels = [label for label, _ in ctx.panel()]
    assert labels[0] == "constant(1+0j)"
    assert len(labels) == len(set(labels))
    assert len(labels) == len(reference_potentials())


def test_free_field_brackets() -> None:
    """Test that the bracket cases of the free field pass."""
    config = RunConfig()
    ctx = SuiteContext(config, suite_rng(config.seed, "theorem41"), config.potential.build(), "zero")
    cases = [c for c in weyl_brackets(ctx) if c.potential == "zero"]
    assert cases
    rows = [execute(c) for c in cases]
    assert all(r.passed for r in rows), [r.detail for r in rows if not r.passed]


def test_execute_records_unexpected_errors(log_handler: FakeLogHandler) -> None:
    """Test that any exception raised by a case becomes a failing row."""

    def broken() -> Outcome:
        msg = "solver state lost"
        raise RuntimeError(msg)

    row = execute(Case(5, "transport", broken, potential="gaussian(1+0j,0,1)"))
    assert not row.passed
    assert row.invariant == "transport"
    assert row.potential == "gaussian(1+0j,0,1)"
    assert row.detail == "RuntimeError: solver state lost"
    assert log_handler.counter.warnings == 1


def test_suite_keys() -> None:
    """Test the canonical suite keys and that every alias resolves to one."""
    assert tuple(SUITES) == SUITE_NAMES
    assert set(SUITE_ALIASES.values()) <= set(SUITES)
    assert {"theorem41", "lemma42", "lemma45", "theorem44-delta"} <= set(SUITES)


def test_riccati_tolerance() -> None:
    """Test the floor and the h²-scaled branch of the residual tolerance."""
    assert riccati_tolerance(1e-4, 1.0) == 1e-6
    assert riccati_tolerance(1e-4, 1e3) == pytest.approx(1e-5)


@pytest.mark.parametrize(
    ("potential", "y", "q"),
    [
        (tabulated_sample(), 0.592, CoverPoint(-0.284 + 0.768j, Sheet.MINUS)),
        (tabulated_sample(), -0.3, CoverPoint(0.4 + 0.6j, Sheet.PLUS)),
        (GaussianBump(1.0, 0.0, 1.0), 0.2, CoverPoint(0.1 - 0.9j, Sheet.MINUS)),
    ],
)
def test_riccati_residual_case(potential, y: float, q: CoverPoint) -> None:
    """Test the Riccati residual on tabulated and Gaussian fields, both components."""
    row = execute(Case(0, "riccati-residual", partial(_riccati_case, potential, y, q)))
    assert row.passed, row
    assert row.abs_residual <= row.budget


@pytest.mark.slow
@pytest.mark.parametrize("name", SUITE_NAMES)
def test_suite_passes_with_defaults(name: str) -> None:
    """Test that each suite passes end to end under the default configuration."""
    report = run_suite(name, RunConfig())
    assert report.passed, [r for r in report.rows if not r.passed][:5]
    assert report.name == name


@pytest.mark.slow
def test_suite_alias_runs_canonical_suite() -> None:
    """Test that a descriptive alias runs the canonical suite with the same rows."""
    config = RunConfig(suites=["lemma42"])
    assert run_suite("wronskian-identity", config).rows == run_suite("lemma42", config).rows
