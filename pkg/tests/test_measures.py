"""Test the quality measures."""
import os

import numpy as np

# noinspection PyPackageRequirements
import pytest

from fdstpy.grid import GridParams
from fdstpy.measures import (
    MeasureReport,
    RNGSpec,
    complexity_exponent,
    decay_rate,
    decay_rates,
    half_line_profiles,
    holder_exponents,
    is_aligned,
    line_decay_table,
    measure_d1,
    measure_d2,
    measure_d3,
    measure_d4,
    measure_d5,
    measure_d6,
    measure_d7,
    measure_d8,
    monotone_majorant,
    quantize,
    random_images,
    summary_lines,
    threshold_count,
    threshold_magnitude,
    write_csv,
)
from fdstpy.shearlets import ShearletCoefficients, SubbandIndex, \
    WindowTable, build_window_bank
from fdstpy.transform import TransformPlan, build_plan
from fdstpy.weights import WeightMap


def _plan(n: int, r: int) -> TransformPlan:
    """Create a plan with unit weights."""
    params = GridParams(n, r)
    return TransformPlan(WeightMap.constant(params, 1.0),
                         WindowTable(params, build_window_bank()))


def _ramp(params: GridParams) -> ShearletCoefficients:
    """Create coefficients with distinct magnitudes 1, 2, 3, ..."""
    c = ShearletCoefficients.zeros(params)
    return c.with_flat(np.arange(1, c.count + 1, dtype=complex))


def test_rng_spec() -> None:
    """Test the random number specification."""
    a = random_images(RNGSpec(3), 8, 2)
    b = random_images(RNGSpec(3), 8, 2)
    assert len(a) == 2
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not np.array_equal(a[0], a[1])
    c = random_images(RNGSpec(3, "Philox"), 8, 1)
    assert not np.array_equal(a[0], c[0])
    with pytest.raises(ValueError):
        RNGSpec(0, "Xorshift")
    with pytest.raises(ValueError):
        RNGSpec(-1)


def test_monotone_majorant() -> None:
    """Test the non-increasing majorant."""
    assert monotone_majorant(np.array([1.0, -3.0, 2.0, 0.0])).tolist() == \
        [3.0, 3.0, 2.0, 0.0]
    m = monotone_majorant(np.array([[1.0, 0.0], [2.0, 5.0]]), axis=0)
    assert m.tolist() == [[2.0, 5.0], [2.0, 5.0]]


def test_decay_rates() -> None:
    """Test the decay rate estimates."""
    x = np.arange(1, 33, dtype=float)
    assert decay_rate(x ** -2.0) == pytest.approx(-2.0, abs=1e-9)
    rates = decay_rates(np.stack((x ** -1.0, x ** -3.0), axis=1))
    assert rates == pytest.approx([-1.0, -3.0])
    profiles = half_line_profiles(np.arange(16, dtype=float).reshape(4, 4))
    assert profiles.shape == (2, 8)
    assert profiles[:, 0].tolist() == [8.0, 12.0]
    assert profiles[:, 4].tolist() == [2.0, 3.0]


def test_holder_exponents() -> None:
    """Test the local regularity estimate."""
    h = holder_exponents(np.full((8, 8), 2.0))
    assert h.shape == (8, 8)
    assert np.allclose(h, 0.0, atol=1e-6)
    with pytest.raises(ValueError):
        holder_exponents(np.zeros((8, 8)), 0)


def test_is_aligned() -> None:
    """Test the alignment of subbands and edges."""
    assert is_aligned(SubbandIndex(11, 3, 4), 0.5, False)
    assert not is_aligned(SubbandIndex(11, 3, 2), 0.5, False)
    assert is_aligned(SubbandIndex(22, 1, 0), 0.0, True)
    assert not is_aligned(SubbandIndex(12, 1, 0), 0.0, True)
    assert is_aligned(SubbandIndex(21, 2, 4), 1.0, False)
    assert not is_aligned(SubbandIndex(1, -1, 0), 0.0, False)


def test_thresholding() -> None:
    """Test the coefficient manipulations."""
    c = _ramp(GridParams(8, 4))
    count = c.count
    for p in (0.0, 1.0, 3.5):
        kept = np.count_nonzero(threshold_count(c, p).flatten())
        assert kept == int(np.ceil(count * 2.0 ** -p))
    kept = threshold_count(c, 2.0).flatten()
    assert kept[-1] == count
    assert kept[0] == 0

    adjusted = threshold_magnitude(c, 2.0).flatten()
    assert np.count_nonzero(adjusted) == \
        np.count_nonzero(np.arange(1, count + 1) >= 0.75 * count)
    printed = threshold_magnitude(c, 2.0, "printed").flatten()
    assert np.count_nonzero(printed) == \
        np.count_nonzero(np.arange(1, count + 1) >= 0.25 * count)
    with pytest.raises(ValueError):
        threshold_magnitude(c, 2.0, "other")

    q = quantize(c, 4.0).flatten()
    step = count / 16.0
    assert np.all(np.abs(q - c.flatten()) <= step / 2 + 1e-9)
    assert np.allclose(np.round(q.real / step), q.real / step)
    zero = ShearletCoefficients.zeros(GridParams(8, 4))
    assert np.count_nonzero(quantize(zero, 4.0).flatten()) == 0


def test_report(tmp_path) -> None:
    """Test the report records and files."""
    plan = _plan(8, 4)
    rep = MeasureReport("d5", "M_shear", [(1, 0.25), (2, 0.5)], plan, None,
                        0.1)
    assert rep.ordinates == (0.25, 0.5)
    assert rep.choice is None
    with pytest.raises(ValueError):
        rep.value  # noqa: B018
    assert rep.to_csv() == ("# measure,id,N,R,choice,seed\n"
                            "# d5,M_shear,8,4,-,-\n"
                            "abscissa,ordinate\n"
                            "1.0,0.25\n2.0,0.5\n")
    scalar = MeasureReport("d1", "M_alg", [(0, 1e-15)], plan, 7, 0.0,
                           ["cg-not-converged"])
    assert scalar.value == 1e-15
    with pytest.raises(ValueError):
        MeasureReport("d1", "M_alg", [], plan, 7, 0.0)

    out = os.path.join(str(tmp_path), "reports")
    path = write_csv(rep, out)
    assert os.path.basename(path) == "d5_M_shear.csv"
    with open(path, encoding="utf-8") as f:
        assert f.read() == rep.to_csv()
    with pytest.raises(TypeError):
        write_csv("x", out)  # type: ignore

    lines = summary_lines([rep, scalar])
    assert len(lines) == 3
    assert lines[1].startswith("d5")
    assert "0.25 0.5" in lines[1]
    assert lines[2].endswith("[cg-not-converged]")


@pytest.mark.parametrize(
    "n", [32, 64, pytest.param(128, marks=pytest.mark.slow)])
def test_measure_d1(n: int) -> None:
    """Test the exactness of the windowing."""
    reports = measure_d1(_plan(n, 8), RNGSpec(1))
    assert len(reports) == 1
    assert reports[0].name == "M_alg"
    assert reports[0].seed == 1
    assert reports[0].value < 1e-10


def test_measures_d2_d3() -> None:
    """Test the isometry and tightness measures on fitted weights."""
    plan = build_plan(16, 8)
    d2 = measure_d2(plan, RNGSpec(2))
    assert [r.name for r in d2] == ["M_isom1", "M_isom2", "M_isom3"]
    assert 0.0 <= d2[0].value < 0.1
    assert 1.0 <= d2[1].value < 3.0
    assert d2[2].value < 1e-4
    d3 = measure_d3(plan, RNGSpec(2))
    assert [r.name for r in d3] == ["M_tight1", "M_tight2"]
    assert d3[0].value < 0.1
    assert d3[1].value < 1e-4


def test_measure_d4() -> None:
    """Test the localization of the reference shearlet."""
    reports = measure_d4(_plan(32, 8))
    assert [r.name for r in reports] == [
        "M_decay1", "M_supp", "M_decay2", "M_smooth1", "M_smooth2"]
    assert all(np.isfinite(r.value) for r in reports)
    assert 0.0 <= reports[1].value <= 1.0
    assert reports[0].value < 0.0


def test_measure_d5() -> None:
    """Test the shear invariance curve."""
    (rep, ) = measure_d5(_plan(16, 8))
    assert rep.name == "M_shear"
    assert [p[0] for p in rep.points] == [1.0, 2.0]
    assert all(v >= 0.0 for v in rep.ordinates)
    (rep, ) = measure_d5(_plan(64, 8))
    assert len(rep.points) == 3
    (bare, ) = measure_d5(_plan(64, 8), taper=False)
    assert [p[0] for p in bare.points] == [1.0, 2.0, 3.0]
    assert all(np.isfinite(v) for v in bare.ordinates)
    with pytest.raises(ValueError):
        measure_d5(_plan(16, 8), 0.3)
    with pytest.raises(ValueError):
        measure_d5(_plan(16, 8), 2.0)


def test_measure_d6() -> None:
    """Test the speed measure on small sizes."""
    reports = measure_d6(lambda n: _plan(n, 4), RNGSpec(0), (8, 16), 1)
    assert [r.name for r in reports] == [
        "M_speed1", "M_speed2", "M_speed3", "timings"]
    assert [p[0] for p in reports[3].points] == [8.0, 16.0]
    assert all(t > 0.0 for t in reports[3].ordinates)
    assert reports[2].value > 0.0
    with pytest.raises(ValueError):
        measure_d6(lambda n: _plan(n, 4), RNGSpec(0), (8, ), 1)
    assert complexity_exponent([2, 4], [1.0, 16.0]) == pytest.approx(2.0)


def test_measure_d7() -> None:
    """Test the edge decay curves."""
    plan = _plan(32, 8)
    reports = measure_d7(plan)
    assert [r.name for r in reports] == [
        "c_aligned", "c_other", "M_geo1", "M_geo2"]
    p = plan.params
    assert [a for a, _ in reports[0].points] == \
        list(range(p.j_low, p.j_high + 1))
    assert all(v > 0.0 for v in reports[0].ordinates)
    lines = line_decay_table(plan)
    assert [r.name for r in lines] == ["c_max0", "c_max1"]
    assert all(r.measure == "d7" for r in lines)
    assert len(lines[0].points) == p.j_high - p.j_low + 1


def test_measure_d8() -> None:
    """Test the reconstruction after manipulations."""
    reports = measure_d8(build_plan(16, 8))
    assert [r.name for r in reports] == ["M_thres1", "M_thres2", "M_quant"]
    assert all(len(r.points) == 5 for r in reports)
    thres1 = reports[0].ordinates
    assert thres1[-1] > thres1[0]
    assert all(v >= 0.0 for r in reports for v in r.ordinates)
    assert reports[2].ordinates[0] < reports[2].ordinates[-1]


@pytest.mark.slow
def test_geometric_decay_at_n256() -> None:
    """Test that non-aligned coefficients decay faster than aligned ones."""
    reports = measure_d7(build_plan(256, 8))
    assert reports[3].value <= reports[2].value - 0.3


@pytest.mark.slow
def test_shear_invariance_at_n256() -> None:
    """Test that the tapered edge removes the border defect and rises."""
    plan = build_plan(256, 8)
    (rep, ) = measure_d5(plan)
    (bare, ) = measure_d5(plan, taper=False)
    assert [p[0] for p in rep.points] == [1.0, 2.0, 3.0, 4.0]
    assert rep.ordinates[0] < bare.ordinates[0] / 5
    assert rep.ordinates[0] < rep.ordinates[-1]
    assert all(v < 0.1 for v in rep.ordinates)


@pytest.mark.slow
def test_robustness_at_n256() -> None:
    """Test the thresholding and quantization curves at N=256."""
    thres1, _, quant = measure_d8(build_plan(256, 8))
    values = thres1.ordinates
    assert all(a < b for a, b in zip(values, values[1:]))
    for value, known in zip(values[2:], (2.5e-5, 1e-3, 7e-3)):
        assert known / 3 <= value <= 3 * known
    values = quant.ordinates
    assert all(a < b for a, b in zip(values, values[1:]))
    for value, known in zip(values, (0.034, 0.047, 0.057, 0.071, 0.109)):
        assert known / 10 <= value <= known
