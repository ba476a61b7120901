"""Errors raised by weyl-lab."""


class WeylLabError(Exception):
    """Base class for all weyl-lab errors."""


class DegeneratePoles(WeylLabError):
    """Two poles of a rational map closer than the separation floor."""


class ZeroResidueValue(WeylLabError):
    """A numerator value q(λ_k) vanishes."""


class PoleEvaluation(WeylLabError):
    """Evaluation at (or too close to) a pole, or a degenerate Möbius inversion."""


class CoincidentPoints(WeylLabError):
    """Spectral points that must be distinct coincide."""


class IntegrationFailure(WeylLabError):
    """The ODE integrator gave up (step-size underflow or too many chart switches)."""


class TruncationFailure(WeylLabError):
    """The half-line truncation could not reach the requested tolerance within max_radius."""


class TooCloseToCut(WeylLabError):
    """|Im λ| below the cut floor."""


class NotNormalizable(WeylLabError):
    """The Weyl function is infinite, so the Weyl solution cannot be normalized by its first component."""


class DegenerateExpansionPoint(WeylLabError):
    """The expansion at P_+ needs ψ(y) ≠ 0."""


class QuadratureFailure(WeylLabError):
    """Adaptive quadrature did not converge."""


class ConfigError(WeylLabError):
    """Invalid run configuration."""


class IoError(WeylLabError):
    """Writing a report failed."""
