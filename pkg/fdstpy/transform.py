"""
The fast digital shearlet transform, its adjoint, and its inverse.

The transform is `S = W sqrt(w) P`: the pseudo-polar Fourier transform P,
a pointwise weighting with the square root of the fitted weights w, and
the subband windowing W. Since `W*W` is the identity,
`S*S = P* w P`, which is close to the identity for well-fitted weights.
The inverse solves `P* w P I = P* sqrt(w) W* C` by conjugate gradients.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Final

import numpy as np

from fdstpy.cg import CGResult, conjugate_gradient
from fdstpy.grid import CONE_21, CONE_22, GridParams
from fdstpy.logger import log_duration, logger
from fdstpy.ppft import PPImage, adjoint_ppft, check_image, ppft
from fdstpy.shearlets import (
    DEFAULT_PROFILE,
    ShearletCoefficients,
    SubbandGeometry,
    SubbandIndex,
    WindowBank,
    WindowTable,
    analyze,
    analyze_block,
    build_window_bank,
    scale_shear_table,
    shearlet_window,
    synthesize,
)
from fdstpy.storage import load_cached_weights, store_cached_weights
from fdstpy.types import check_array, check_float, check_int, type_error
from fdstpy.weights import WeightMap, apply_weight, fit_weights, gram_apply


@dataclass(frozen=True, init=False, eq=False)
class TransformPlan:
    """Everything needed to run the transform on one grid."""

    #: the grid parameters
    params: GridParams
    #: the weights
    weights: WeightMap
    #: the window profiles
    bank: WindowBank
    #: the precomputed windows of all subbands
    table: WindowTable

    def __init__(self, weights: WeightMap, table: WindowTable):
        """
        Create the plan.

        :param weights: the weights
        :param table: the windows
        """
        if not isinstance(weights, WeightMap):
            raise type_error(weights, "weights", WeightMap)
        if not isinstance(table, WindowTable):
            raise type_error(table, "table", WindowTable)
        if weights.params != table.params:
            raise ValueError(f"Weights are for {weights.params}, windows "
                             f"for {table.params}.")
        object.__setattr__(self, "params", table.params)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bank", table.bank)
        object.__setattr__(self, "table", table)

    @property
    def subbands(self) -> tuple[SubbandGeometry, ...]:
        """The subband geometries in canonical order."""
        return scale_shear_table(self.params)

    def with_weights(self, weights: WeightMap) -> "TransformPlan":
        """
        Get a plan with the same windows and other weights.

        :param weights: the new weights
        :returns: the new plan
        """
        return TransformPlan(weights, self.table)


@dataclass(frozen=True, init=False, eq=False)
class CGConfig:
    """The settings of the conjugate gradient inversion."""

    #: the residual tolerance
    tol: float
    #: the iteration cap
    max_iter: int
    #: the initial image, or `None` for zero
    initial: np.ndarray | None
    #: is the tolerance relative to the norm of the right-hand side?
    relative: bool

    def __init__(self, tol: float = 1e-6, max_iter: int = 100,
                 initial: np.ndarray | None = None, relative: bool = False):
        """
        Create the configuration.

        :param tol: the residual tolerance
        :param max_iter: the iteration cap, 0 returns the initial image
        :param initial: the initial image
        :param relative: use a relative tolerance?
        """
        object.__setattr__(self, "tol", check_float(tol, "tol", 0.0, True))
        object.__setattr__(self, "max_iter", check_int(
            max_iter, "max_iter", 0))
        object.__setattr__(self, "initial", None if initial is None
                           else check_array(initial, "initial"))
        object.__setattr__(self, "relative", bool(relative))


def obtain_weights(params: GridParams, choice: int,
                   cache_dir: str | None = None) -> WeightMap:
    """
    Load weights from the cache or fit and cache them.

    :param params: the grid parameters
    :param choice: the basis choice
    :param cache_dir: the cache directory, or `None` to always fit
    :returns: the weights
    """
    if cache_dir is not None:
        cached: Final[WeightMap | None] = load_cached_weights(
            cache_dir, params, choice)
        if cached is not None:
            return cached
    with log_duration(f"fitting choice-{choice} weights for {params}"):
        weights: Final[WeightMap] = fit_weights(params, choice)
    if cache_dir is not None:
        store_cached_weights(cache_dir, weights)
    return weights


def build_plan(n: int, r: int = 8, choice: int = 1,
               profile: str = DEFAULT_PROFILE,
               cache_dir: str | None = None) -> TransformPlan:
    """
    Build a transform plan.

    :param n: the image side length
    :param r: the radial oversampling rate
    :param choice: the weight basis choice
    :param profile: the window smoothness profile
    :param cache_dir: the weight cache directory, or `None`
    :returns: the plan
    """
    params: Final[GridParams] = GridParams(n, r)
    bank: Final[WindowBank] = build_window_bank(profile)
    with log_duration(f"building the plan for {params}"):
        weights: Final[WeightMap] = obtain_weights(params, choice, cache_dir)
        table: Final[WindowTable] = WindowTable(params, bank)
    logger(f"plan for {params} has {len(table)} subbands.")
    return TransformPlan(weights, table)


def fdst(plan: TransformPlan, image: np.ndarray) -> ShearletCoefficients:
    """
    Compute the fast digital shearlet transform of an image.

    :param plan: the plan
    :param image: the N x N image
    :returns: the coefficients
    """
    check_image(plan.params, image)
    return analyze(apply_weight(ppft(plan.params, image), plan.weights, 0.5),
                   plan.table)


def adjoint_fdst(plan: TransformPlan, c: ShearletCoefficients) -> np.ndarray:
    """
    Compute the adjoint transform of shearlet coefficients.

    :param plan: the plan
    :param c: the coefficients
    :returns: the N x N image
    """
    return adjoint_ppft(apply_weight(synthesize(c, plan.table),
                                     plan.weights, 0.5))


def inverse_fdst(plan: TransformPlan, c: ShearletCoefficients,
                 cfg: CGConfig | None = None) -> CGResult:
    """
    Invert the transform by solving `P* w P I = adjoint_fdst(C)`.

    :param plan: the plan
    :param c: the coefficients
    :param cfg: the solver settings, the defaults if `None`
    :returns: the solver result, whose `x` is the image
    """
    settings: Final[CGConfig] = CGConfig() if cfg is None else cfg
    if settings.initial is not None:
        check_image(plan.params, settings.initial)
    b: Final[np.ndarray] = adjoint_fdst(plan, c)
    with log_duration(f"inverting the transform for {plan.params}"):
        return conjugate_gradient(gram_apply(plan.weights), b,
                                  settings.initial, settings.tol,
                                  settings.max_iter, settings.relative)


def shifted_sector2(jw: PPImage, shift: int) -> PPImage:
    """
    Shift sector 2 of grid data along the angular index.

    Entry `(2, k, l)` of the result is entry `(2, k, l + shift)` of the
    input, or zero if that index does not exist. On sector 2, this is the
    shear `(wx, wy) -> (wx, wy - t wx)` with `shift = t N/2`.

    :param jw: the grid data
    :param shift: the index shift
    :returns: the shifted data, sector 1 unchanged
    """
    size: Final[int] = jw.params.angular_size
    data: Final[np.ndarray] = jw.data.copy()
    data[1] = 0.0
    if abs(shift) < size:
        if shift >= 0:
            data[1, :, :size - shift] = jw.data[1, :, shift:]
        else:
            data[1, :, -shift:] = jw.data[1, :, :size + shift]
    return PPImage(jw.params, data)


def shear_coefficient_check(plan: TransformPlan, image: np.ndarray,
                            j: int, s: int, t: float | Fraction) -> float:
    """
    Check that shearing the grid data only relabels the shears.

    The weighted grid data of `image` is sheared on sector 2 by `t`. The
    coefficients of shear `s` of the sheared data are then compared with
    the coefficients of shear `s + 2^j t` of the original data on the cones
    21 and 22.

    :param plan: the plan
    :param image: the image
    :param j: the scale, at least 0
    :param s: the shear
    :param t: the shear parameter, with `2^j t` an integer
    :returns: the largest coefficient difference relative to `||image||`
    :raises ValueError: if the shears are not interior or `2^j t` is not
        an integer
    """
    params: Final[GridParams] = plan.params
    check_image(params, image)
    j = check_int(j, "j", 0, params.j_high)
    s = check_int(s, "s")
    scaled: Final[Fraction] = Fraction(t).limit_denominator(1 << 30) \
        * (1 << j)
    if scaled.denominator != 1:
        raise ValueError(f"2^j t must be an integer, but is {scaled} for "
                         f"j={j} and t={t}.")
    target: Final[int] = s + int(scaled)
    bound: Final[int] = 1 << j
    if not ((-bound < s < bound) and (-bound < target < bound)):
        raise ValueError(f"Shears {s} and {target} must lie strictly "
                         f"between {-bound} and {bound}.")
    norm: Final[float] = float(np.linalg.norm(image))
    if norm <= 0.0:
        return 0.0
    jw: Final[PPImage] = apply_weight(ppft(params, image), plan.weights, 0.5)
    sheared: Final[PPImage] = shifted_sector2(
        jw, int(scaled) * (params.n >> (j + 1)))
    defect: float = 0.0
    for cone in (CONE_21, CONE_22):
        left = analyze_block(sheared, shearlet_window(
            params, plan.bank, SubbandIndex(cone, j, s)))
        right = analyze_block(jw, shearlet_window(
            params, plan.bank, SubbandIndex(cone, j, target)))
        defect = max(defect, float(np.max(np.abs(left - right))))
    return defect / norm
