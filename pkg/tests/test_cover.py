"""Test the spectral cover and its involution."""
import pytest
from hypothesis import given

from tests.tools.strategies import cover_points
from weyl_lab.cover import Component, CoverPoint, Sheet, classify, involute, left_point, right_point
from weyl_lab.exceptions import TooCloseToCut


@pytest.mark.parametrize(
    ("lam", "sheet", "component"),
    [
        (1j, Sheet.PLUS, Component.R),
        (-1j, Sheet.MINUS, Component.R),
        (1j, Sheet.MINUS, Component.L),
        (-1j, Sheet.PLUS, Component.L),
    ],
)
def test_classify(lam: complex, sheet: Sheet, component: Component) -> None:
    """Test the Γ_R/Γ_L classification on both half-planes."""
    assert classify(CoverPoint(lam, sheet)) is component
    assert CoverPoint(lam, sheet).component is component


def test_involute_example() -> None:
    """Test (1+2i, +) → (1−2i, −)."""
    assert involute(CoverPoint(1 + 2j, Sheet.PLUS)) == CoverPoint(1 - 2j, Sheet.MINUS)


def test_cut_floor() -> None:
    """Test that points on the real axis are rejected."""
    with pytest.raises(TooCloseToCut):
        CoverPoint(1 + 1e-9j, Sheet.PLUS)


def test_sheet_from_string() -> None:
    """Test that sheets parse from their symbols."""
    assert CoverPoint(1j, "+").sheet is Sheet.PLUS
    assert Sheet.MINUS.flipped() is Sheet.PLUS


def test_component_points() -> None:
    """Test the points of Γ_R and Γ_L above λ."""
    for lam in (0.5 + 1j, 0.5 - 1j):
        assert right_point(lam).component is Component.R
        assert left_point(lam).component is Component.L
    assert right_point(2j).sheet is Sheet.PLUS
    assert left_point(2j).sheet is Sheet.MINUS


class TestInvolutionProperties:
    @given(cover_points())
    def test_involutive(self, q: CoverPoint) -> None:
        """Test ε_a∘ε_a = id."""
        assert involute(involute(q)) == q

    @given(cover_points())
    def test_preserves_component(self, q: CoverPoint) -> None:
        """Test that ε_a maps Γ_R to Γ_R and Γ_L to Γ_L."""
        assert classify(involute(q)) is classify(q)
        assert q.involute().upper is not q.upper
