"""Test the pseudo-polar grid."""
from fractions import Fraction

import numpy as np

# noinspection PyPackageRequirements
import pytest

from fdstpy.grid import (
    CENTER,
    CONE_11,
    CONE_12,
    CONE_21,
    CONE_22,
    GridParams,
    c_factor_grid,
    classify,
    cone_sector,
    cone_sign,
    enumerate_points,
    frequency_grid,
    grid_point,
    locate,
    multiplicity_grid,
    quadrant_of,
)


def test_grid_params() -> None:
    """Test the derived sizes and the scale range."""
    p = GridParams(4, 2)
    assert p.m0 == Fraction(9)
    assert p.shape == (2, 9, 5)
    assert p.image_shape == (4, 4)
    assert (p.k_max, p.l_max) == (4, 2)
    assert str(p) == "N=4, R=2"
    assert GridParams(512).r == 8
    assert GridParams(512, 8).m0 > 512
    assert [GridParams(32, r).j_low for r in (2, 4, 8, 16)] == \
        [0, -1, -1, -2]
    assert [GridParams(n, 8).j_high for n in (4, 8, 32, 64, 512)] == \
        [1, 2, 3, 3, 5]
    assert GridParams(8, 4) < GridParams(16, 2)


def test_grid_params_invalid() -> None:
    """Test that invalid grid parameters are rejected."""
    for n, r in ((2, 8), (6, 8), (12, 8), (8, 3), (8, 0)):
        with pytest.raises(ValueError):
            GridParams(n, r)
    with pytest.raises(TypeError):
        GridParams(8.0, 8)  # type: ignore


def test_points_and_cones() -> None:
    """Test the coordinates and cones of grid points."""
    p = GridParams(8, 2)
    q = grid_point(p, 2, 3, 0)
    assert (q.omega_x, q.omega_y) == (3.0, 0.0)
    assert quadrant_of(p, q) == CONE_21
    assert quadrant_of(p, grid_point(p, 2, -3, 1)) == CONE_22
    assert quadrant_of(p, grid_point(p, 1, 2, -4)) == CONE_11
    assert quadrant_of(p, grid_point(p, 1, -1, 4)) == CONE_12
    assert quadrant_of(p, grid_point(p, 1, 0, 3)) == CENTER
    with pytest.raises(ValueError):
        grid_point(p, 3, 0, 0)
    with pytest.raises(ValueError):
        grid_point(p, 1, p.k_max + 1, 0)
    with pytest.raises(ValueError):
        grid_point(p, 1, 0, p.l_max + 1)
    assert [cone_sector(c) for c in (CONE_11, CONE_12, CONE_21, CONE_22)] \
        == [1, 1, 2, 2]
    assert [cone_sign(c) for c in (CONE_11, CONE_12, CONE_21, CONE_22)] \
        == [1, -1, 1, -1]
    with pytest.raises(ValueError):
        cone_sector(13)


def test_sector_geometry() -> None:
    """Test that sector 1 holds |wx| <= |wy| and sector 2 the transpose."""
    p = GridParams(8, 4)
    wx, wy = frequency_grid(p)
    assert np.all(np.abs(wx[0]) <= np.abs(wy[0]) + 1e-12)
    assert np.all(np.abs(wy[1]) <= np.abs(wx[1]) + 1e-12)
    assert np.array_equal(wx[0], wy[1])
    assert np.array_equal(wy[0], wx[1])
    assert float(np.max(np.abs(wy[0]))) == p.n


def test_classes_and_boundary_factors() -> None:
    """Test that the squared boundary factors share duplicated points."""
    p = GridParams(8, 4)
    assert np.allclose(c_factor_grid(p) ** 2 * multiplicity_grid(p), 1.0)
    center = classify(p, grid_point(p, 2, 0, 2))
    assert center.kind == "center"
    assert center.c_factor == pytest.approx(1.0 / np.sqrt(18.0))
    seam = classify(p, grid_point(p, 1, 5, -4))
    assert seam.kind == "seam"
    assert seam.c_factor == pytest.approx(1.0 / np.sqrt(2.0))
    assert classify(p, grid_point(p, 1, 5, 3)).c_factor == 1.0
    distinct = 1 + 2 * 2 * p.k_max * p.n
    assert (1.0 / multiplicity_grid(p)).sum() == pytest.approx(distinct)


def test_locate() -> None:
    """Test that the interior points are found again from coordinates."""
    p = GridParams(8, 2)
    for sector in (1, 2):
        for q in enumerate_points(p, sector):
            if (q.k == 0) or (abs(q.l) == p.l_max):
                continue
            assert locate(p, q.omega_x, q.omega_y) == (sector, q.k, q.l)
    assert locate(p, 0.0, 0.0) == (1, 0, 0)
    assert locate(p, 0.3, 0.7) is None
    assert locate(p, 0.0, 100.0) is None
