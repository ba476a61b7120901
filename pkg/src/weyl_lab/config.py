"""Run configuration of the weyl-lab driver."""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Extra, Field, ValidationError, root_validator, validator

from weyl_lab.cover import CUT_FLOOR, Sheet
from weyl_lab.exceptions import ConfigError
from weyl_lab.potentials import (
    CompactBump,
    ConstantPotential,
    GaussianBump,
    Potential,
    ZeroPotential,
    tabulated_from_rows,
)

logger = logging.getLogger(__name__)

SUITE_NAMES: Tuple[str, ...] = (
    "ahcore-algebra",
    "transition-symmetries",
    "weyl-identities",
    "theorem41",
    "gradients",
    "lemma42",
    "lemma45",
    "reality",
    "theorem44-delta",
    "asymptotic-series",
)

SUITE_ALIASES: Dict[str, str] = {
    "weyl-brackets": "theorem41",
    "wronskian-identity": "lemma42",
    "shift-asymptotics": "lemma45",
    "delta-recovery": "theorem44-delta",
}
"""Descriptive names accepted in place of the canonical suite keys."""


def canonical_suite(name: str) -> str:
    """Map a descriptive alias to its suite key; other names pass through."""
    return SUITE_ALIASES.get(name, name)


SEED_LIMIT = 2**64


class _Strict(BaseModel):
    class Config:
        """Configuration for this pydantic object."""

        extra = Extra.forbid


class PotentialSpec(_Strict):
    kind: Literal["zero", "constant", "gaussian", "compact", "tabulated"] = "zero"
    """Potential family."""

    amplitude: Tuple[float, float] = (1.0, 0.0)
    """(Re, Im) of the amplitude; the constant value for kind constant."""

    center: float = 0.0

    width: float = 1.0
    """Gaussian width, or the support radius of the compact bump."""

    rows: Optional[List[Tuple[float, float, float]]] = None
    """Inline table of (x, Re ψ, Im ψ) rows for kind tabulated."""

    @root_validator(skip_on_failure=True)
    def validate_kind(cls, values: Dict) -> Dict:  # noqa: N805
        if values["kind"] == "tabulated":
            rows = values.get("rows")
            if not rows or len(rows) < 4:  # noqa: PLR2004
                msg = "tabulated potential needs an inline table of at least 4 rows"
                raise ValueError(msg)
        elif values.get("rows") is not None:
            msg = f"rows are only allowed for kind tabulated, not {values['kind']}"
            raise ValueError(msg)
        if values["kind"] in ("gaussian", "compact") and values["width"] <= 0:
            msg = f"width must be positive, got {values['width']}"
            raise ValueError(msg)
        return values

    @property
    def label(self) -> str:
        if self.kind in ("zero", "tabulated"):
            return self.kind
        a = complex(*self.amplitude)
        if self.kind == "constant":
            return f"constant({a:g})"
        return f"{self.kind}({a:g},{self.center:g},{self.width:g})"

    def build(self) -> Potential:
        """The potential this spec describes."""
        a = complex(*self.amplitude)
        if self.kind == "zero":
            return ZeroPotential()
        if self.kind == "constant":
            return ConstantPotential(a)
        if self.kind == "gaussian":
            return GaussianBump(a, self.center, self.width)
        if self.kind == "compact":
            return CompactBump(a, self.center, self.width)
        return tabulated_from_rows(self.rows or [])


class LambdaGrid(_Strict):
    re_min: float = -2.0
    re_max: float = 2.0
    re_count: int = Field(default=5, ge=1)
    im_min: float = 0.5
    im_max: float = 2.0
    im_count: int = Field(default=4, ge=1)

    @root_validator(skip_on_failure=True)
    def validate_cut(cls, values: Dict) -> Dict:  # noqa: N805
        if values["re_min"] > values["re_max"] or values["im_min"] > values["im_max"]:
            msg = "lambda_grid ranges must satisfy min ≤ max"
            raise ValueError(msg)
        ims = np.linspace(values["im_min"], values["im_max"], values["im_count"])
        if np.any(np.abs(ims) < CUT_FLOOR):
            msg = f"lambda_grid row crosses the cut strip |Im λ| < {CUT_FLOOR}"
            raise ValueError(msg)
        return values

    def points(self) -> List[complex]:
        """Grid points, imaginary index outer, real index inner."""
        res = np.linspace(self.re_min, self.re_max, self.re_count)
        ims = np.linspace(self.im_min, self.im_max, self.im_count)
        return [complex(float(r), float(i)) for i in ims for r in res]


class Tolerances(_Strict):
    ode: float = 1e-10
    """Integrator tolerance for transition matrices."""

    weyl: float = 1e-10
    """Target accuracy of Weyl values."""

    quadrature: float = 1e-10
    """Relative tolerance of the bracket quadrature."""

    bracket_rel: float = 1e-6
    """Relative acceptance of the bracket identities."""

    algebra: float = 1e-12
    """Acceptance of the rational-map algebra checks."""

    @validator("*")
    def validate_positive(cls, v: float, field: Any) -> float:  # noqa: N805
        if not v > 0:
            msg = f"tolerance {field.name} must be positive, got {v}"
            raise ValueError(msg)
        return v


class ProbeSettings(_Strict):
    base_point: float = 0.0
    """Base point z of the gradients and delta-probe verbs."""

    lam: Tuple[float, float] = (0.0, 1.5)
    """(Re, Im) of λ for the gradients verb."""

    sheet: Sheet = Sheet.PLUS

    y_values: List[float] = [0.0, 0.5, 1.0, 2.0]
    """Evaluation points of the gradients verb."""

    tau_ladder: List[float] = [25.0, 50.0, 100.0]
    """Asymptotic parameters of the delta-probe verb."""

    test_width: float = Field(default=0.5, gt=0)

    @validator("tau_ladder")
    def validate_taus(cls, v: List[float]) -> List[float]:  # noqa: N805
        if not v or min(v) < 10:  # noqa: PLR2004
            msg = f"tau_ladder must be nonempty with every τ ≥ 10, got {v}"
            raise ValueError(msg)
        return v

    @validator("lam")
    def validate_lam(cls, v: Tuple[float, float]) -> Tuple[float, float]:  # noqa: N805
        if abs(v[1]) < CUT_FLOOR:
            msg = f"probe λ lies in the cut strip: Im λ = {v[1]}"
            raise ValueError(msg)
        return v


class RunConfig(_Strict):
    potential: PotentialSpec = PotentialSpec()
    suites: List[str] = list(SUITE_NAMES)
    lambda_grid: LambdaGrid = LambdaGrid()
    tolerances: Tolerances = Tolerances()

    seed: int = Field(default=0, ge=0, lt=SEED_LIMIT)
    """Seed of every randomized suite; runs never draw entropy from the system."""

    output_dir: Path = Path("weyl-lab-out")
    format: Literal["csv", "json", "both"] = "both"  # noqa: A003

    workers: int = Field(default=1, ge=1)
    """Threads used to dispatch independent cases."""

    probe: ProbeSettings = ProbeSettings()

    @validator("suites", each_item=True)
    def validate_suite(cls, v: str) -> str:  # noqa: N805
        v = canonical_suite(v)
        if v not in SUITE_NAMES:
            msg = f"unknown suite {v!r}; known suites: {', '.join(SUITE_NAMES)}"
            raise ValueError(msg)
        return v


def parse_config(data: Dict[str, Any]) -> RunConfig:
    """Validate a configuration mapping; every validation error becomes a ConfigError."""
    try:
        return RunConfig.parse_obj(data)
    except ValidationError as e:
        msg = f"invalid run configuration: {e}"
        raise ConfigError(msg) from e


def load_config(path: Optional[Path] = None, **overrides: Any) -> RunConfig:
    """Read a JSON run configuration, apply command-line overrides and validate.

    Without a path the defaults are used: zero potential and every suite.
    """
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            msg = f"cannot read config {path}: {e}"
            raise ConfigError(msg) from e
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            msg = f"config {path} is not valid JSON: {e}"
            raise ConfigError(msg) from e
        if not isinstance(data, dict):
            msg = f"config {path} must hold a JSON object"
            raise ConfigError(msg)
    data.update({k: v for k, v in overrides.items() if v is not None})
    config = parse_config(data)
    logger.debug(f"config: potential[{config.potential.label}], suites[{config.suites}], seed[{config.seed}]")
    return config
