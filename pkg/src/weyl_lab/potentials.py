"""Potentials ψ(x) of the auxiliary problem."""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

logger = logging.getLogger(__name__)

DEFAULT_TAIL_BOUND = 1e-16

# ∫_{-1}^{1} exp(-1/(1 - t²)) dt
_MOLLIFIER_MASS = 0.44399381616807943


class Potential(ABC):
    """A continuous complex field ψ on the real line.

    Outside ``effective_support`` the field is bounded by ``tail_bound``.
    """

    kind: str = "abstract"

    @abstractmethod
    def __call__(self, x: float) -> complex:
        """ψ(x)."""

    @abstractmethod
    def derivative(self, x: float) -> complex:
        """ψ′(x)."""

    @property
    @abstractmethod
    def effective_support(self) -> Tuple[float, float]:
        """Interval outside which |ψ| ≤ tail_bound."""

    @property
    def tail_bound(self) -> float:
        return 0.0

    def perturbed(self, direction: Callable[[float], float], coefficient: complex) -> "PerturbedPotential":
        """ψ + coefficient·φ, with ψ̄ following as the conjugate."""
        return PerturbedPotential(self, direction, coefficient)


@dataclass(frozen=True)
class ZeroPotential(Potential):
    kind = "zero"

    def __call__(self, x: float) -> complex:  # noqa: ARG002
        return 0j

    def derivative(self, x: float) -> complex:  # noqa: ARG002
        return 0j

    @property
    def effective_support(self) -> Tuple[float, float]:
        return (0.0, 0.0)


@dataclass(frozen=True)
class ConstantPotential(Potential):
    c: complex
    kind = "constant"

    def __call__(self, x: float) -> complex:  # noqa: ARG002
        return complex(self.c)

    def derivative(self, x: float) -> complex:  # noqa: ARG002
        return 0j

    @property
    def effective_support(self) -> Tuple[float, float]:
        return (-math.inf, math.inf)


@dataclass(frozen=True)
class GaussianBump(Potential):
    amplitude: complex
    center: float
    width: float
    tail: float = DEFAULT_TAIL_BOUND
    kind = "gaussian"

    def __post_init__(self) -> None:
        if self.width <= 0:
            msg = f"width must be positive, got {self.width}"
            raise ValueError(msg)

    def __call__(self, x: float) -> complex:
        s = (x - self.center) / self.width
        return complex(self.amplitude) * math.exp(-0.5 * s * s)

    def derivative(self, x: float) -> complex:
        s = (x - self.center) / self.width
        return -complex(self.amplitude) * s / self.width * math.exp(-0.5 * s * s)

    @property
    def effective_support(self) -> Tuple[float, float]:
        amp = abs(self.amplitude)
        if amp <= self.tail:
            return (self.center, self.center)
        half = self.width * math.sqrt(2.0 * math.log(amp / self.tail))
        return (self.center - half, self.center + half)

    @property
    def tail_bound(self) -> float:
        return self.tail


@dataclass(frozen=True)
class CompactBump(Potential):
    """A·exp(−r²/(1 − r²)) with r = (x − center)/radius, identically zero for |r| ≥ 1."""

    amplitude: complex
    center: float
    radius: float
    kind = "compact"

    def __post_init__(self) -> None:
        if self.radius <= 0:
            msg = f"radius must be positive, got {self.radius}"
            raise ValueError(msg)

    def __call__(self, x: float) -> complex:
        r = (x - self.center) / self.radius
        if abs(r) >= 1.0:
            return 0j
        return complex(self.amplitude) * math.exp(-r * r / (1.0 - r * r))

    def derivative(self, x: float) -> complex:
        r = (x - self.center) / self.radius
        if abs(r) >= 1.0:
            return 0j
        u = 1.0 - r * r
        return complex(self.amplitude) * math.exp(-r * r / u) * (-2.0 * r / (u * u)) / self.radius

    @property
    def effective_support(self) -> Tuple[float, float]:
        return (self.center - self.radius, self.center + self.radius)


@dataclass(frozen=True)
class TabulatedPotential(Potential):
    """Cubic spline through (grid, values), zero outside the grid."""

    grid: Tuple[float, ...]
    values: Tuple[complex, ...]
    kind = "tabulated"
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.grid) != len(self.values):
            msg = f"grid has {len(self.grid)} points but {len(self.values)} values"
            raise ValueError(msg)
        if len(self.grid) < 4:  # noqa: PLR2004
            msg = f"tabulated potential needs at least 4 points, got {len(self.grid)}"
            raise ValueError(msg)
        x = np.asarray(self.grid, dtype=float)
        if np.any(np.diff(x) <= 0):
            err = "tabulated grid must be strictly increasing"
            raise ValueError(err)
        object.__setattr__(self, "_spline", CubicSpline(x, np.asarray(self.values, dtype=complex)))

    def __call__(self, x: float) -> complex:
        if x < self.grid[0] or x > self.grid[-1]:
            return 0j
        return complex(self._spline(x))

    def derivative(self, x: float) -> complex:
        if x < self.grid[0] or x > self.grid[-1]:
            return 0j
        return complex(self._spline(x, 1))

    @property
    def effective_support(self) -> Tuple[float, float]:
        return (self.grid[0], self.grid[-1])


@dataclass(frozen=True)
class Mollifier:
    """Smooth bump of unit integral supported on [center − width, center + width]."""

    center: float
    width: float

    def __call__(self, x: float) -> float:
        t = (x - self.center) / self.width
        if abs(t) >= 1.0:
            return 0.0
        return math.exp(-1.0 / (1.0 - t * t)) / (_MOLLIFIER_MASS * self.width)

    @property
    def support(self) -> Tuple[float, float]:
        return (self.center - self.width, self.center + self.width)


@dataclass(frozen=True)
class PerturbedPotential(Potential):
    base: Potential
    direction: Callable[[float], float]
    coefficient: complex
    kind = "perturbed"

    def __call__(self, x: float) -> complex:
        return self.base(x) + self.coefficient * self.direction(x)

    def derivative(self, x: float) -> complex:
        # only used by the expansion residuals, which never see perturbed fields
        return self.base.derivative(x)

    @property
    def effective_support(self) -> Tuple[float, float]:
        lo, hi = self.base.effective_support
        support: Optional[Tuple[float, float]] = getattr(self.direction, "support", None)
        if support is None:
            return (lo, hi)
        return (min(lo, support[0]), max(hi, support[1]))

    @property
    def tail_bound(self) -> float:
        return self.base.tail_bound


def eval_potential(p: Potential, x: float) -> complex:
    """ψ(x) for any potential family."""
    return p(x)


def tabulated_from_rows(rows: Sequence[Sequence[float]]) -> TabulatedPotential:
    """Build a tabulated potential from (x, Re ψ, Im ψ) rows."""
    grid = tuple(float(r[0]) for r in rows)
    values = tuple(complex(r[1], r[2]) for r in rows)
    return TabulatedPotential(grid, values)


def tabulated_sample(
    amplitude: complex = 0.8 + 0.3j, center: float = 0.0, radius: float = 2.0, points: int = 41
) -> TabulatedPotential:
    """Tabulated version of a compact bump, used as the tabulated test potential."""
    bump = CompactBump(amplitude, center, radius)
    grid = np.linspace(center - radius, center + radius, points)
    return TabulatedPotential(tuple(float(x) for x in grid), tuple(bump(float(x)) for x in grid))
