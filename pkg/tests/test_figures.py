"""
Tests for figure datasets and the ASCII preview.
"""

from pathlib import Path

import numpy as np
import pytest

from qbgeom.exceptions import DomainError
from qbgeom.figures import FIGURE_NAMES, ascii_preview, build_figure, figure_recipe
from qbgeom.models import ModelParams


@pytest.fixture
def figure_params() -> ModelParams:
    """Default physics on a shortened horizon."""
    return ModelParams(t_max=100.0, n_steps=1001)


def build_small(name: str, params: ModelParams):
    return build_figure(
        name, params, l_points=11, t_points=201, lambda_points=3, horizon_factor=5.0
    )


class TestFigureRecipes:
    """Test cases for the figure name switch."""

    @pytest.mark.parametrize(
        "name,kind,observable",
        [
            ("fig2a", "time-geometry", "energy"),
            ("fig2b", "time-geometry", "ergotropy"),
            ("fig3a", "configurations", "energy"),
            ("fig3b", "configurations", "ergotropy"),
            ("fig4a", "geometry-width", "energy"),
            ("fig4b", "geometry-width", "power"),
            ("fig4c", "geometry-width", "ergotropy"),
        ],
    )
    def test_recipes(self, name, kind, observable):
        """Test every known figure name."""
        recipe = figure_recipe(name)
        assert (recipe.kind, recipe.observable) == (kind, observable)

    def test_unknown_figure(self):
        """Test that an unknown name is a usage error."""
        with pytest.raises(DomainError):
            figure_recipe("fig9")

    def test_names_cover_all_recipes(self):
        """Test that the public name list and the switch agree."""
        for name in FIGURE_NAMES:
            assert figure_recipe(name).name == name

    def test_readme_names_the_power_map(self):
        """Test that the README describes fig4b as instantaneous power."""
        readme = Path(__file__).parent.parent / "README.md"
        row = next(
            line for line in readme.read_text(encoding="utf-8").splitlines()
            if "`fig4b`" in line
        )
        assert "instantaneous power" in row
        assert "average power" not in row
        assert figure_recipe("fig4b").observable == "power"


class TestFigureDatasets:
    """Test cases for the generated datasets."""

    def test_time_geometry_map(self, figure_params):
        """Test the geometry × time map and its manifest."""
        dataset = build_small("fig2a", figure_params)
        assert dataset.result.values.shape == (11, 201)
        assert dataset.manifest.command == "figure"
        assert dataset.manifest.figure == "fig2a"

    def test_ergotropy_is_localised(self, figure_params):
        """Test that fewer cells carry ergotropy than carry energy."""
        energy = build_small("fig2a", figure_params).result.values
        ergotropy = build_small("fig2b", figure_params).result.values
        assert np.mean(ergotropy > 0) < np.mean(energy > 0)

    def test_configuration_series(self, figure_params):
        """Test the three labelled series and the channel-swap equality."""
        dataset = build_small("fig3a", figure_params)
        assert list(dataset.columns) == [
            "t_gamma",
            "lambda_t",
            "energy_gamma_a_zero",
            "energy_gamma_s_zero",
            "energy_mixed",
        ]
        np.testing.assert_allclose(
            dataset.columns["energy_gamma_a_zero"],
            dataset.columns["energy_gamma_s_zero"],
            atol=1e-12,
        )
        assert dataset.result is None
        assert dataset.preview_matrix().shape == (3, figure_params.n_steps)

    def test_geometry_width_map(self, figure_params):
        """Test the maxima map with finite cells."""
        dataset = build_small("fig4b", figure_params)
        assert dataset.result.values.shape == (3, 11)
        assert dataset.manifest.observable == "max_power"
        assert np.all(np.isfinite(dataset.result.values))


class TestAsciiPreview:
    """Test cases for the character heatmap."""

    def test_size_and_legend(self):
        """Test the sampled size and the min/max legend."""
        values = np.arange(200.0).reshape(10, 20)
        lines = ascii_preview(values, width=8, height=5).splitlines()
        assert len(lines) == 6
        assert all(len(line) == 8 for line in lines[:-1])
        assert lines[-1].startswith("min 0")

    def test_extremes_use_the_ends_of_the_ramp(self):
        """Test blank for the minimum and the densest glyph for the maximum."""
        lines = ascii_preview(np.array([[0.0, 1.0]]), ramp=" #").splitlines()
        assert lines[0] == " #"

    def test_non_finite_cells(self):
        """Test that NaN cells are marked."""
        lines = ascii_preview(np.array([[0.0, np.nan, 1.0]])).splitlines()
        assert lines[0][1] == "?"

    def test_empty_matrix(self):
        """Test that an empty matrix gives an empty preview."""
        assert ascii_preview(np.empty((0, 0))) == ""
