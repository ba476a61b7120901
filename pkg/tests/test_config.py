"""Test the run configuration and its validation."""
import json
from pathlib import Path

import pytest

from weyl_lab.config import SUITE_NAMES, LambdaGrid, PotentialSpec, RunConfig, load_config, parse_config
from weyl_lab.cover import Sheet
from weyl_lab.exceptions import ConfigError
from weyl_lab.potentials import CompactBump, ConstantPotential, GaussianBump, TabulatedPotential, ZeroPotential

ROWS = [[x / 2, 1.0 - x / 10, 0.0] for x in range(-6, 7)]


def test_defaults() -> None:
    """Test the defaults: zero potential, every suite, seed 0."""
    config = RunConfig()
    assert config.potential.kind == "zero"
    assert tuple(config.suites) == SUITE_NAMES
    assert config.seed == 0
    assert config.format == "both"
    assert config.workers == 1
    assert config.probe.sheet is Sheet.PLUS


def test_canonical_suite_names() -> None:
    """Test the canonical suite keys and their descriptive aliases."""
    config = parse_config({"suites": ["theorem41", "lemma42", "lemma45", "theorem44-delta"]})
    assert config.suites == ["theorem41", "lemma42", "lemma45", "theorem44-delta"]
    aliased = parse_config({"suites": ["weyl-brackets", "wronskian-identity", "shift-asymptotics", "delta-recovery"]})
    assert aliased.suites == config.suites
    assert {"theorem41", "lemma42", "lemma45", "theorem44-delta"} <= set(SUITE_NAMES)


@pytest.mark.parametrize(
    "data",
    [
        {"suites": ["no-such-suite"]},
        {"potential": {"kind": "tabulated"}},
        {"potential": {"kind": "gaussian", "width": 0.0}},
        {"potential": {"kind": "zero", "rows": ROWS}},
        {"lambda_grid": {"im_min": -1.0, "im_max": 1.0, "im_count": 3}},
        {"lambda_grid": {"re_min": 1.0, "re_max": -1.0}},
        {"seed": -1},
        {"workers": 0},
        {"format": "xml"},
        {"tolerances": {"weyl": 0.0}},
        {"probe": {"tau_ladder": [5.0, 50.0]}},
        {"probe": {"lam": [1.0, 0.0]}},
        {"unknown_key": 1},
    ],
)
def test_invalid_configs(data: dict) -> None:
    """Test that invalid configurations raise ConfigError."""
    with pytest.raises(ConfigError):
        parse_config(data)


def test_load_config(tmp_path: Path) -> None:
    """Test reading a JSON file with command-line overrides on top."""
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps({"potential": {"kind": "constant", "amplitude": [1.0, 0.0]}, "suites": ["reality"], "seed": 3}),
        encoding="utf-8",
    )
    config = load_config(path, seed=7, workers=None, output_dir=str(tmp_path / "out"))
    assert config.seed == 7
    assert config.workers == 1
    assert config.suites == ["reality"]
    assert config.output_dir == tmp_path / "out"
    assert isinstance(config.potential.build(), ConstantPotential)


def test_load_config_errors(tmp_path: Path) -> None:
    """Test missing files, broken JSON and non-object documents."""
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(broken)
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(listed)


def test_load_config_without_path() -> None:
    """Test that no path means the defaults."""
    assert load_config() == RunConfig()


def test_grid_points() -> None:
    """Test the grid ordering: imaginary index outer, real index inner."""
    grid = LambdaGrid(re_min=-1.0, re_max=1.0, re_count=3, im_min=1.0, im_max=2.0, im_count=2)
    assert grid.points() == [-1 + 1j, 1j, 1 + 1j, -1 + 2j, 2j, 1 + 2j]


def test_potential_labels_and_build() -> None:
    """Test labels and the potentials built from each kind."""
    cases = [
        (PotentialSpec(), "zero", ZeroPotential),
        (PotentialSpec(kind="constant", amplitude=(1.0, 0.0)), "constant(1+0j)", ConstantPotential),
        (PotentialSpec(kind="gaussian", center=1.0, width=0.5), "gaussian(1+0j,1,0.5)", GaussianBump),
        (PotentialSpec(kind="compact", width=2.0), "compact(1+0j,0,2)", CompactBump),
        (PotentialSpec(kind="tabulated", rows=ROWS), "tabulated", TabulatedPotential),
    ]
    for spec, label, kind in cases:
        assert spec.label == label
        assert isinstance(spec.build(), kind)
