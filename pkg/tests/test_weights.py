"""Test the weights of the pseudo-polar grid."""
import numpy as np

# noinspection PyPackageRequirements
import pytest

from fdstpy.grid import GridParams
from fdstpy.ppft import adjoint_ppft, ppft
from fdstpy.weights import (
    WeightBasis,
    WeightMap,
    apply_weight,
    condition_residual,
    condition_residual_direct,
    expand_point_values,
    fit_weights,
    gram_apply,
    gram_condition,
    is_symmetric,
    isometry_defect,
    lag_counts,
    quarter_shape,
    residual_norm,
    solve_weight_coeffs,
    uniform_residual_norm,
    weight_basis,
)


def _random_point_values(params: GridParams, seed: int) -> np.ndarray:
    """Draw nonnegative point values with only the center in row 0."""
    values = np.random.default_rng(seed).uniform(
        0.0, 1.0, quarter_shape(params))
    values[0, 1:] = 0.0
    return values


def test_weight_bases() -> None:
    """Test the sizes and the coverage of the recommended bases."""
    p = GridParams(16, 8)
    assert len(weight_basis(p, 1)) == 7
    assert len(weight_basis(p, 2)) == 5
    assert len(weight_basis(p, 3)) == p.l_max + 2
    exact = weight_basis(GridParams(4, 16), 0)
    assert len(exact) == 1 + 32 * 3
    for choice in (0, 1, 2, 3):
        basis = weight_basis(GridParams(8, 4), choice)
        assert basis.choice == choice
        assert np.all(basis.functions >= 0)
    with pytest.raises(ValueError):
        weight_basis(p, 4)
    with pytest.raises(ValueError):
        weight_basis(GridParams(512, 8), 0)


def test_basis_must_cover() -> None:
    """Test that a basis missing a grid point is rejected."""
    p = GridParams(8, 2)
    funcs = np.ones((1, ) + quarter_shape(p))
    funcs[0, 3, 2] = 0.0
    with pytest.raises(ValueError):
        WeightBasis(p, None, ("x", ), funcs)
    with pytest.raises(ValueError):
        WeightBasis(p, None, ("x", ), -np.ones((1, ) + quarter_shape(p)))


def test_point_values_round_trip() -> None:
    """Test that expanded point values are recovered from the weight map."""
    p = GridParams(8, 4)
    values = _random_point_values(p, 21)
    w = WeightMap.from_point_values(p, values)
    assert np.allclose(w.point_values, values)
    assert is_symmetric(w)
    total = expand_point_values(p, values).sum()
    assert total == pytest.approx(
        values[0, 0] + 4 * values[1:, 0].sum() + 4 * values[1:, -1].sum()
        + 8 * values[1:, 1:-1].sum())


def test_weight_map_invalid() -> None:
    """Test that negative, complex and misshapen weights are rejected."""
    p = GridParams(8, 2)
    with pytest.raises(ValueError):
        WeightMap(p, -np.ones(p.shape))
    with pytest.raises(ValueError):
        WeightMap(p, np.ones(p.shape, complex))
    with pytest.raises(ValueError):
        WeightMap(p, np.ones((2, 3, 3)))
    with pytest.raises(TypeError):
        WeightMap("p", np.ones(p.shape))  # type: ignore
    w = WeightMap.constant(p, 2.0)
    assert not w.values.flags.writeable
    asym = np.ones(p.shape)
    asym[0, 3, 2] = 2.0
    assert not is_symmetric(WeightMap(p, asym))


def test_condition_residual_against_direct_sum() -> None:
    """Test the quarter-cone residual against the sum over all entries."""
    for p, w in ((GridParams(4, 16), fit_weights(GridParams(4, 16), 2)),
                 (GridParams(8, 4), WeightMap.from_point_values(
                     GridParams(8, 4),
                     _random_point_values(GridParams(8, 4), 22)))):
        fast = condition_residual(p, w)
        direct = condition_residual_direct(p, w)
        assert fast.shape == (2 * p.n - 1, 2 * p.n - 1)
        assert np.max(np.abs(fast - direct)) <= 1e-12 * max(
            1.0, float(np.max(np.abs(direct))))


def test_exact_weights() -> None:
    """Test that R = 16 admits weights making P*wP the identity."""
    p = GridParams(4, 16)
    w = fit_weights(p, 0)
    assert w.choice == 0
    assert np.all(w.values >= 0)
    assert float(np.max(np.abs(condition_residual(p, w)))) < 1e-8
    gen = np.random.default_rng(23)
    image = gen.standard_normal((4, 4))
    back = gram_apply(w)(image)
    assert np.linalg.norm(back - image) < 1e-8 * np.linalg.norm(image)


def test_fitted_weights() -> None:
    """Test the fitted weights of the recommended bases."""
    p = GridParams(16, 8)
    uniform = uniform_residual_norm(p)
    for choice in (1, 2, 3):
        w = fit_weights(p, choice)
        assert w.choice == choice
        assert len(w.coeffs) == len(weight_basis(p, choice))
        assert min(w.coeffs) >= 0.0
        assert is_symmetric(w, 1e-15)
        assert residual_norm(p, w) < uniform
        assert residual_norm(p, w) == pytest.approx(float(np.sqrt(np.sum(
            lag_counts(p) * condition_residual_direct(p, w) ** 2))))


def test_residual_norm_is_gram_distance() -> None:
    """Test that the residual norm is the Frobenius norm of P*wP - Id."""
    p = GridParams(8, 4)
    w = WeightMap.from_point_values(p, _random_point_values(p, 29))
    gram = gram_apply(w)
    columns = []
    for i in range(p.n * p.n):
        unit = np.zeros(p.n * p.n)
        unit[i] = 1.0
        columns.append(gram(unit.reshape(p.n, p.n)).reshape(-1))
    matrix = np.stack(columns, axis=1)
    assert residual_norm(p, w) == pytest.approx(
        float(np.linalg.norm(matrix - np.eye(p.n * p.n))), rel=1e-9)


def test_fit_minimizes_gram_distance() -> None:
    """Test that rescaling the fitted coefficients cannot improve them."""
    p = GridParams(16, 8)
    basis = weight_basis(p, 2)
    w = solve_weight_coeffs(p, basis)
    best = residual_norm(p, w)
    for factor in (0.98, 1.02):
        scaled = WeightMap.from_point_values(p, np.tensordot(
            factor * np.array(w.coeffs), basis.functions, axes=1))
        assert residual_norm(p, scaled) >= best * (1.0 - 1e-9)


def test_isometry_and_condition() -> None:
    """Test the isometry defect and the condition of fitted weights."""
    p = GridParams(16, 8)
    w = fit_weights(p, 1)
    gen = np.random.default_rng(24)
    images = [gen.standard_normal((16, 16)) for _ in range(3)]
    worst = isometry_defect(p, w, images, "max")
    mean = isometry_defect(p, w, images, "mean")
    assert 0.0 <= mean <= worst < 0.1
    spectrum = gram_condition(p, w)
    assert spectrum.converged
    assert 0.0 < spectrum.lambda_min <= spectrum.lambda_max
    assert 1.0 <= spectrum.condition < 3.0
    assert gram_condition(p, w) == spectrum
    with pytest.raises(ValueError):
        isometry_defect(p, w, images, "median")
    with pytest.raises(ValueError):
        isometry_defect(p, w, [], "max")


def test_apply_weight() -> None:
    """Test the pointwise weighting and the Gram operator."""
    p = GridParams(8, 4)
    w = WeightMap.from_point_values(p, _random_point_values(p, 25))
    image = np.random.default_rng(26).standard_normal((8, 8))
    j = ppft(p, image)
    half = apply_weight(apply_weight(j, w, 0.5), w, 0.5)
    assert np.allclose(half.data, apply_weight(j, w, 1).data)
    assert np.allclose(gram_apply(w)(image),
                       adjoint_ppft(apply_weight(j, w, 1)))
    with pytest.raises(ValueError):
        apply_weight(j, w, 2)
    with pytest.raises(ValueError):
        apply_weight(j, WeightMap.constant(GridParams(8, 2), 1.0), 1)


def test_custom_basis() -> None:
    """Test fitting a user-supplied basis."""
    p = GridParams(8, 4)
    basis = WeightBasis(p, None, ("constant", ),
                        np.ones((1, ) + quarter_shape(p)))
    w = solve_weight_coeffs(p, basis)
    assert w.choice is None
    assert len(w.coeffs) == 1
    assert residual_norm(p, w) == pytest.approx(uniform_residual_norm(p))


#: the mean isometry defect on five white-noise images, per (N, choice)
_DEFECTS: dict[tuple[int, int], float] = {
    (32, 1): 4.3e-3, (64, 1): 2.6e-3,
    (32, 2): 4.2e-3, (64, 2): 4.0e-3,
    (32, 3): 9.8e-3, (64, 3): 6.2e-3}
#: the condition number of P*wP, per (N, choice)
_CONDITIONS: dict[tuple[int, int], float] = {
    (32, 1): 1.328, (64, 1): 1.483,
    (32, 2): 1.379, (64, 2): 1.503,
    (32, 3): 1.760, (64, 3): 1.887}


@pytest.mark.slow
def test_choice_1_at_n32() -> None:
    """Test the isometry and condition of the choice 1 weights at N=32."""
    p = GridParams(32, 8)
    w = fit_weights(p, 1)
    gen = np.random.default_rng(27)
    images = [gen.standard_normal((32, 32)) for _ in range(5)]
    assert 2e-3 <= isometry_defect(p, w, images, "mean") <= 9e-3
    assert 1.2 <= gram_condition(p, w).condition <= 1.6


@pytest.mark.slow
@pytest.mark.parametrize("n,choice", sorted(_DEFECTS))
def test_recommended_choices(n: int, choice: int) -> None:
    """Test the fitted bases against their known defect and condition."""
    p = GridParams(n, 8)
    w = fit_weights(p, choice)
    gen = np.random.default_rng(28)
    images = [gen.standard_normal((n, n)) for _ in range(5)]
    defect = isometry_defect(p, w, images, "mean")
    assert _DEFECTS[(n, choice)] / 2 <= defect <= 2 * _DEFECTS[(n, choice)]
    condition = gram_condition(p, w).condition
    assert _CONDITIONS[(n, choice)] / 2 <= condition \
        <= 2 * _CONDITIONS[(n, choice)]
