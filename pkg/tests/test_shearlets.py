"""Test the shearlet windows, the subband geometry, and the windowing."""
import numpy as np

# noinspection PyPackageRequirements
import pytest

from fdstpy.grid import CONES, GridParams, c_factor_grid
from fdstpy.ppft import PPImage
from fdstpy.shearlets import (
    PROFILES,
    ShearletCoefficients,
    SubbandIndex,
    WindowBank,
    WindowTable,
    analyze,
    angular_range,
    build_window_bank,
    partition_of_unity,
    radial_range,
    scale_shear_table,
    shearlet_atom,
    shearlet_window,
    shears,
    subband_geometry,
    synthesize,
)


def _random_grid_data(params: GridParams, seed: int) -> PPImage:
    """Draw complex Gaussian grid data."""
    gen = np.random.default_rng(seed)
    return PPImage(params, gen.standard_normal(params.shape)
                   + 1j * gen.standard_normal(params.shape))


def test_profiles() -> None:
    """Test the symmetry and the range of the smoothness profiles."""
    x = np.linspace(-0.5, 1.5, 201)
    for name in PROFILES:
        bank = WindowBank(name)
        assert np.allclose(bank.nu(x) + bank.nu(1.0 - x), 1.0)
        assert np.all(bank.nu(x[x <= 0]) == 0.0)
        assert np.all(bank.nu(x[x >= 1]) == 1.0)
        assert np.all(np.diff(bank.nu(x)) >= 0.0)
    with pytest.raises(ValueError):
        WindowBank("gauss")


def test_radial_windows() -> None:
    """Test that the squared radial windows sum to one."""
    xi = np.linspace(-1.0, 1.0, 401)
    for name in PROFILES:
        bank = build_window_bank(name)
        assert np.allclose(bank.w0(xi) ** 2 + bank.w(xi) ** 2, 1.0)
        a = np.linspace(0.25, 1.0, 301)[1:]
        assert np.allclose(bank.w(a) ** 2 + bank.w(4.0 * a) ** 2, 1.0)
        assert np.all(bank.w(np.array([0.0, 0.25, 4.0, 5.0])) == 0.0)
        assert np.all(bank.w0(np.array([1.0, 2.0])) == 0.0)


def test_angular_windows() -> None:
    """Test that the squared shifted bumps sum to one."""
    for name in PROFILES:
        bank = build_window_bank(name)
        for j in (0, 1, 3):
            x = np.linspace(-(2 ** j), 2 ** j, 257)
            total = sum(bank.v(x - s) ** 2
                        for s in range(-(2 ** j), 2 ** j + 1))
            assert np.allclose(total, 1.0)
        assert float(bank.v(0.0)) == 1.0
        assert float(bank.v(1.0)) == 0.0
        assert np.all(bank.v0(np.arange(5)) == 1.0)


def test_geometry() -> None:
    """Test the radial and angular ranges of the subbands."""
    p = GridParams(32, 8)
    assert list(shears(p, -1)) == [0]
    assert list(shears(p, 2)) == list(range(-4, 5))
    assert radial_range(p, -1) == (1, 4)
    assert radial_range(p, 0) == (1, 16)
    assert radial_range(p, 1) == (4, 64)
    assert radial_range(p, 3) == (64, 128)
    assert angular_range(p, -1, 0) == (-16, 16)
    assert angular_range(p, 2, 0) == (-4, 4)
    assert angular_range(p, 2, 4) == (12, 16)
    assert angular_range(p, 2, -4) == (-16, -12)
    with pytest.raises(ValueError):
        angular_range(p, 2, 5)
    with pytest.raises(ValueError):
        radial_range(p, 4)

    g = subband_geometry(p, SubbandIndex(22, 3, 0))
    assert g.k_range == (-128, -64)
    assert g.shape == (65, 5)
    low = subband_geometry(p, SubbandIndex(1, -2, 0))
    assert low.k_range == (-1, 1)
    assert low.l_range == (-16, 16)
    with pytest.raises(ValueError):
        subband_geometry(p, SubbandIndex(1, -1, 0))
    with pytest.raises(ValueError):
        subband_geometry(p, SubbandIndex(11, 4, 0))
    with pytest.raises(ValueError):
        SubbandIndex(13, 0, 0)


def test_scale_shear_table() -> None:
    """Test the canonical order and the number of subbands."""
    p = GridParams(32, 8)
    table = scale_shear_table(p)
    per_cone = sum(len(shears(p, j)) for j in range(p.j_low, p.j_high + 1))
    assert len(table) == 2 + 4 * per_cone
    assert [g.index.iota for g in table[:2]] == [1, 2]
    assert all(g.index.is_low for g in table[:2])
    cones = [g.index.iota for g in table[2:]]
    assert cones == sorted(cones)
    assert set(cones) == set(CONES)
    indices = [g.index for g in table[2:2 + per_cone]]
    assert indices == sorted(indices)
    assert table is scale_shear_table(GridParams(32, 8))


def test_partition_of_unity() -> None:
    """Test that the squared windows sum to one at every indexed entry."""
    for n, r in ((8, 2), (8, 4), (16, 16), (32, 8), (64, 8)):
        p = GridParams(n, r)
        for name in PROFILES:
            total = partition_of_unity(WindowTable(p, WindowBank(name)))
            assert np.max(np.abs(total - 1.0)) < 1e-10


def test_analyze_synthesize() -> None:
    """Test exact reconstruction, Parseval, and adjointness."""
    p = GridParams(32, 8)
    table = WindowTable(p, build_window_bank())
    j = _random_grid_data(p, 31)
    c = analyze(j, table)
    assert np.linalg.norm(synthesize(c, table).data - j.data) \
        < 1e-12 * j.norm()
    assert c.norm() == pytest.approx(j.norm(), rel=1e-12)

    d = ShearletCoefficients.zeros(p).with_flat(
        np.random.default_rng(32).standard_normal(c.count)
        + 0j)
    lhs = c.inner(d)
    rhs = np.vdot(synthesize(d, table).data, j.data)
    assert abs(lhs - rhs) < 1e-11 * c.norm() * d.norm()


def test_coefficients() -> None:
    """Test the coefficient container."""
    p = GridParams(16, 8)
    c = ShearletCoefficients.zeros(p)
    table = scale_shear_table(p)
    assert c.count == sum(g.l1 * g.l2 for g in table)
    assert list(c) == [g.index for g in table]
    assert len(c.low) == 2
    assert c.low[0].shape == (3, 17)
    flat = np.arange(c.count, dtype=complex)
    assert np.array_equal(c.with_flat(flat).flatten(), flat)
    selected = list(c.select(1, (21, 22)))
    assert len(selected) == 2 * len(shears(p, 1))
    assert all(i.j == 1 and i.iota in (21, 22) for i in selected)
    doubled = c.with_flat(flat).map_blocks(lambda i, b: 2 * b)
    assert np.array_equal(doubled.flatten(), 2 * flat)

    blocks = dict(c.blocks)
    del blocks[table[5].index]
    with pytest.raises(ValueError):
        ShearletCoefficients(p, blocks)
    blocks[table[5].index] = np.zeros((1, 1))
    with pytest.raises(ValueError):
        ShearletCoefficients(p, blocks)
    with pytest.raises(ValueError):
        c.inner(ShearletCoefficients.zeros(GridParams(16, 4)))


def test_shearlet_atom() -> None:
    """Test that atoms are the synthesis of unit coefficients with C."""
    p = GridParams(16, 8)
    bank = build_window_bank()
    table = WindowTable(p, bank)
    index = SubbandIndex(21, 1, -1)
    for m in ((0, 0), (3, 2)):
        def __unit(i: SubbandIndex, b: np.ndarray, mm=m) -> np.ndarray:
            out = np.zeros_like(b)
            if i == index:
                out[mm] = 1.0
            return out

        unit = ShearletCoefficients.zeros(p).map_blocks(__unit)
        expected = synthesize(unit, table).data * c_factor_grid(p)
        atom = shearlet_atom(p, bank, index, m)
        assert np.allclose(atom.data, expected)
        assert atom.norm() > 0


def test_window_blocks() -> None:
    """Test the window block of a subband."""
    p = GridParams(16, 8)
    bank = build_window_bank()
    block = shearlet_window(p, bank, SubbandIndex(11, 2, 4))
    assert block.values.shape == block.geometry.shape
    assert not block.values.flags.writeable
    assert np.all(block.values >= 0)
    with_c = shearlet_window(p, bank, SubbandIndex(11, 2, 4), True)
    g = block.geometry
    assert np.allclose(with_c.values[g.row_start:g.row_stop, -1],
                       block.values[g.row_start:g.row_stop, -1]
                       / np.sqrt(2.0))
    assert np.allclose(with_c.values[g.row_start:g.row_stop],
                       block.values[g.row_start:g.row_stop]
                       * c_factor_grid(p)[g.grid_slices(p)])
