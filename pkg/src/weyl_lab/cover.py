"""The two-sheeted spectral cover Γ and its involution."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from weyl_lab.exceptions import TooCloseToCut

CUT_FLOOR = 1e-6


class Sheet(str, enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def flipped(self) -> "Sheet":
        return Sheet.MINUS if self is Sheet.PLUS else Sheet.PLUS


class Component(str, enum.Enum):
    """Γ_R selects solutions square integrable on the right half-line, Γ_L on the left one."""

    R = "R"
    L = "L"


@dataclass(frozen=True)
class CoverPoint:
    lam: complex
    sheet: Sheet

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "sheet", Sheet(self.sheet))
        if abs(self.lam.imag) < CUT_FLOOR:
            msg = f"|Im λ| = {abs(self.lam.imag)} is below the cut floor {CUT_FLOOR}"
            raise TooCloseToCut(msg)

    @property
    def component(self) -> Component:
        return classify(self)

    @property
    def upper(self) -> bool:
        return self.lam.imag > 0

    def involute(self) -> "CoverPoint":
        return involute(self)


def classify(q: CoverPoint) -> Component:
    """Γ_R when the sheet is Plus exactly when Im λ > 0, Γ_L otherwise."""
    if (q.sheet is Sheet.PLUS) == (q.lam.imag > 0):
        return Component.R
    return Component.L


def involute(q: CoverPoint) -> CoverPoint:
    """ε_a: (λ, ±) → (λ̄, ∓)."""
    return CoverPoint(q.lam.conjugate(), q.sheet.flipped())


def right_point(lam: complex) -> CoverPoint:
    """The point of Γ_R above λ."""
    return CoverPoint(lam, Sheet.PLUS if complex(lam).imag > 0 else Sheet.MINUS)


def left_point(lam: complex) -> CoverPoint:
    """The point of Γ_L above λ."""
    return CoverPoint(lam, Sheet.MINUS if complex(lam).imag > 0 else Sheet.PLUS)
