"""
Weights that turn the pseudo-polar Fourier transform into a near isometry.

A weight function w on the grid is symmetric under the maps
(wx, wy) -> (wy, wx), (-wy, wx), (-wx, wy) and (wx, -wy). Its values are
therefore determined by the quarter cone

    (2k/R, -(2k/R)(2l/N)),  1 <= k <= RN/2,  0 <= l <= N/2,

plus the center. Such "point values" are stored in arrays of shape
(RN/2 + 1, N/2 + 1) indexed `[|k|, |l|]`, where row 0 holds the center value
at column 0.

On the indexed grid, a point that occurs several times (the center, the
seams) shares its weight among its copies: an entry carries
`w(point) * C(entry)^2`. This makes `P*wP` the sum over distinct points.

The weighted transform is an isometry if and only if

    sum_{points} w(point) cos(2 pi u wx / m0) cos(2 pi v wy / m0)
        = delta(u, v)

for all -N < u, v < N. The weights are fitted to this condition by
nonnegative least squares over a small basis. Each offset (u, v) counts
as often as it occurs between two pixels, so the fit minimizes the
Frobenius distance of `P*wP` to the identity.
"""
from dataclasses import dataclass
from math import isfinite, sqrt
from typing import Callable, Final, Iterable

import numpy as np
from scipy.optimize import nnls  # type: ignore
from scipy.sparse.linalg import (  # type: ignore
    ArpackNoConvergence,
    LinearOperator,
    eigsh,
)

from fdstpy.grid import GridParams, frequency_grid, index_arrays, \
    multiplicity_grid
from fdstpy.logger import log_duration, logger
from fdstpy.ppft import PPImage, adjoint_ppft, check_image, ppft
from fdstpy.types import check_array, check_int, type_error

#: the exact weights: one basis function per point of the quarter cone
CHOICE_EXACT: Final[int] = 0
#: the admissible basis choices
CHOICES: Final[tuple[int, ...]] = (CHOICE_EXACT, 1, 2, 3)
#: the largest number of unknowns accepted for the exact weights
MAX_EXACT_UNKNOWNS: Final[int] = 20000
#: the number of radial indices per chunk during system assembly
_CHUNK: Final[int] = 64
#: the seed of the start vector of the eigenvalue iterations
_EIGEN_SEED: Final[int] = 0


class WeightFitError(ValueError):
    """The nonnegative least-squares fit of the weights failed."""


def quarter_shape(params: GridParams) -> tuple[int, int]:
    """
    Get the shape of the point-value arrays.

    :param params: the grid parameters
    :returns: the shape `(RN/2 + 1, N/2 + 1)`
    """
    return params.k_max + 1, params.l_max + 1


@dataclass(frozen=True, init=False, eq=False)
class WeightBasis:
    """A set of nonnegative basis functions on the quarter cone."""

    #: the basis choice, or `None` for a custom basis
    choice: int | None
    #: the names of the functions
    names: tuple[str, ...]
    #: the functions, an array of shape `(n,) + quarter_shape(params)`
    functions: np.ndarray

    def __init__(self, params: GridParams, choice: int | None,
                 names: Iterable[str], functions: np.ndarray):
        """
        Create the basis.

        :param params: the grid parameters
        :param choice: the choice id
        :param names: the function names
        :param functions: the function values
        """
        names = tuple(names)
        check_array(functions, "functions",
                    (len(names), ) + quarter_shape(params))
        if len(names) <= 0:
            raise ValueError("A basis needs at least one function.")
        if np.any(functions < 0):
            raise ValueError("Basis functions must be nonnegative.")
        total: Final[np.ndarray] = functions.sum(axis=0)
        covered: Final[np.ndarray] = total[1:] > 0
        if (total[0, 0] <= 0) or (not np.all(covered)):
            raise ValueError("Basis functions must cover every grid point.")
        functions = functions.astype(float)
        functions.setflags(write=False)
        object.__setattr__(self, "choice", choice)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "functions", functions)

    def __len__(self) -> int:
        """
        Get the number of basis functions.

        :return: the number of basis functions
        """
        return len(self.names)


def weight_basis(params: GridParams, choice: int) -> WeightBasis:
    """
    Create one of the recommended weight bases.

    * choice 1: center, |k| = 1, boundary seam, boundary interior, seam
      ramp, seam ring at |k| = RN/2 - 3, interior ramp (7 functions)
    * choice 2: center, boundary seam, boundary interior, seam ramp,
      interior ramp (5 functions)
    * choice 3: center plus one |k|-ramp per radial line (N/2 + 2
      functions)
    * choice 0: one indicator per quarter-cone point plus the center

    Seam means |l| = N/2, the ramp has value |k|.

    :param params: the grid parameters
    :param choice: the choice
    :returns: the basis
    :raises ValueError: if `choice` is unknown

    >>> len(weight_basis(GridParams(32, 8), 1))
    7
    >>> len(weight_basis(GridParams(32, 8), 3))
    18
    """
    choice = check_int(choice, "choice")
    if choice not in CHOICES:
        raise ValueError(f"Weight choice must be in {CHOICES}, "
                         f"but is {choice}.")
    kmax: Final[int] = params.k_max
    seam: Final[int] = params.l_max
    shape: Final[tuple[int, int]] = quarter_shape(params)
    ramp: Final[np.ndarray] = np.broadcast_to(
        np.arange(shape[0], dtype=float)[:, np.newaxis], shape)
    funcs: list[np.ndarray] = []
    names: list[str] = []

    def add(name: str, rows: slice, cols: slice, value) -> None:
        f = np.zeros(shape)
        f[rows, cols] = value if np.isscalar(value) else value[rows, cols]
        funcs.append(f)
        names.append(name)

    add("center", slice(0, 1), slice(0, 1), 1.0)
    if choice == 1:
        add("ring1", slice(1, 2), slice(None), 1.0)
        add("boundary-seam", slice(kmax, kmax + 1), slice(seam, None), 1.0)
        add("boundary", slice(kmax, kmax + 1), slice(0, seam), 1.0)
        add("seam-ramp", slice(2, kmax), slice(seam, None), ramp)
        add("seam-ring", slice(kmax - 3, kmax - 2), slice(seam, None), 1.0)
        add("interior-ramp", slice(2, kmax), slice(0, seam), ramp)
    elif choice == 2:
        add("boundary-seam", slice(kmax, kmax + 1), slice(seam, None), 1.0)
        add("boundary", slice(kmax, kmax + 1), slice(0, seam), 1.0)
        add("seam-ramp", slice(1, kmax), slice(seam, None), ramp)
        add("interior-ramp", slice(1, kmax), slice(0, seam), ramp)
    elif choice == 3:
        clipped: Final[np.ndarray] = np.clip(ramp, 2, max(kmax - 1, 2))
        for l in range(seam + 1):  # noqa: E741
            add(f"line{l}", slice(1, kmax + 1), slice(l, l + 1), clipped)
    else:
        unknowns: Final[int] = 1 + kmax * shape[1]
        if unknowns > MAX_EXACT_UNKNOWNS:
            raise ValueError(f"Exact weights need {unknowns} unknowns, "
                             f"which exceeds {MAX_EXACT_UNKNOWNS}.")
        for k in range(1, kmax + 1):
            for l in range(shape[1]):  # noqa: E741
                add(f"point{k},{l}", slice(k, k + 1), slice(l, l + 1), 1.0)
    return WeightBasis(params, choice, names, np.stack(funcs))


def expand_point_values(params: GridParams,
                        point_values: np.ndarray) -> np.ndarray:
    """
    Spread quarter-cone point values to all indexed grid entries.

    :param params: the grid parameters
    :param point_values: the values indexed `[|k|, |l|]`, center at `[0, 0]`
    :returns: the indexed values `w(point) * C^2`
    """
    check_array(point_values, "point_values", quarter_shape(params))
    k, l = index_arrays(params)  # noqa: E741
    kk: Final[np.ndarray] = np.abs(k)
    ll: Final[np.ndarray] = np.where(kk == 0, 0, np.abs(l))
    return point_values[kk, ll] / multiplicity_grid(params)


@dataclass(frozen=True, init=False, eq=False)
class WeightMap:
    """Nonnegative weights on all indexed entries of the grid."""

    #: the grid parameters
    params: GridParams
    #: the weight of each indexed entry
    values: np.ndarray
    #: the fitted basis coefficients, if any
    coeffs: tuple[float, ...]
    #: the basis choice, or `None`
    choice: int | None

    def __init__(self, params: GridParams, values: np.ndarray,
                 coeffs: Iterable[float] = (),
                 choice: int | None = None):
        """
        Create the weight map.

        :param params: the grid parameters
        :param values: the indexed weights
        :param coeffs: the basis coefficients
        :param choice: the basis choice
        """
        if not isinstance(params, GridParams):
            raise type_error(params, "params", GridParams)
        check_array(values, "values", params.shape)
        if values.dtype.kind == "c":
            raise ValueError("Weights must be real.")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("Weights must be finite and nonnegative.")
        values = values.astype(float)
        values.setflags(write=False)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "coeffs", tuple(map(float, coeffs)))
        object.__setattr__(self, "choice", choice)

    @staticmethod
    def from_point_values(params: GridParams, point_values: np.ndarray,
                          coeffs: Iterable[float] = (),
                          choice: int | None = None) -> "WeightMap":
        """
        Create a weight map from quarter-cone point values.

        :param params: the grid parameters
        :param point_values: the point values
        :param coeffs: the basis coefficients
        :param choice: the basis choice
        :returns: the weight map
        """
        return WeightMap(params, expand_point_values(params, point_values),
                         coeffs, choice)

    @staticmethod
    def constant(params: GridParams, value: float) -> "WeightMap":
        """
        Create a weight map with the same value on every indexed entry.

        :param params: the grid parameters
        :param value: the value
        :returns: the weight map
        """
        return WeightMap(params, np.full(params.shape, float(value)))

    @property
    def point_values(self) -> np.ndarray:
        """The weight per distinct point on the quarter cone."""
        p: Final[GridParams] = self.params
        q = self.values[1, p.k_max:, p.l_max:].copy()
        q[:, -1] *= 2.0
        q[0, :] = 0.0
        q[0, 0] = self.values[:, p.k_max, :].sum()
        return q


def is_symmetric(w: WeightMap, tol: float = 0.0) -> bool:
    """
    Check whether the weights are invariant under the grid symmetries.

    :param w: the weight map
    :param tol: the absolute tolerance
    :returns: `True` if the symmetries hold
    """
    v: Final[np.ndarray] = w.values
    checks: Final[tuple[np.ndarray, ...]] = (
        v[0] - v[1], v[0] - v[0, ::-1, :], v[0] - v[0, :, ::-1],
        v[1] - v[1, ::-1, :], v[1] - v[1, :, ::-1])
    return all(float(np.max(np.abs(c))) <= tol for c in checks)


def lag_counts(params: GridParams) -> np.ndarray:
    """
    Count the pixel pairs of an N x N image with a given offset.

    `P*wP` is the convolution with `delta + residual`, so its squared
    Frobenius distance to the identity is the sum of these counts times
    the squared condition residual.

    :param params: the grid parameters
    :returns: `(N - |u|) (N - |v|)`, indexed `[u + N - 1, v + N - 1]`

    >>> lag_counts(GridParams(2, 2)).tolist()
    [[1.0, 2.0, 1.0], [2.0, 4.0, 2.0], [1.0, 2.0, 1.0]]
    """
    c: Final[np.ndarray] = params.n - np.abs(
        np.arange(-params.n + 1, params.n, dtype=float))
    return np.outer(c, c)


def _row_weights(params: GridParams) -> np.ndarray:
    """
    Get the weight of each reduced equation (u, v >= 0) in the fit.

    An equation stands for its mirror images on the full grid and is
    weighted by their total pixel-pair count, so that the fit minimizes
    `||P*wP - Id||_F`, the expected defect on white-noise images.

    :param params: the grid parameters
    :returns: the array of shape N x N
    """
    u: Final[np.ndarray] = np.arange(params.n, dtype=float)
    rho: Final[np.ndarray] = np.where(u == 0, 1.0, 2.0) * (params.n - u)
    return np.outer(rho, rho)


def _condition_terms(params: GridParams,
                     functions: np.ndarray) -> np.ndarray:
    """
    Evaluate the left-hand side of the isometry condition per function.

    The quarter-cone sum with multiplicities 1 (center), 4 (l = 0 and
    l = N/2) and 8 (other l) is evaluated for u, v in [0, N-1] and then
    symmetrized in (u, v), which gives the sum over all grid points.

    :param params: the grid parameters
    :param functions: point-value arrays, shape `(n,) + quarter_shape`
    :returns: the array of shape `(n, N, N)`, indexed `[function, u, v]`
    """
    n: Final[int] = params.n
    m: Final[int] = params.radial_size
    count: Final[int] = functions.shape[0]
    u: Final[np.ndarray] = np.arange(n, dtype=float)
    l: Final[np.ndarray] = np.arange(params.l_max + 1,  # noqa: E741
                                     dtype=float)
    mult: Final[np.ndarray] = np.where(
        (l == 0) | (l == params.l_max), 4.0, 8.0)
    result = np.zeros((n, count * n))
    for start in range(1, params.k_max + 1, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, params.k_max + 1),
                      dtype=float)
        cos_u = np.cos((2.0 * np.pi / m) * np.outer(k, u))
        cos_v = np.cos((4.0 * np.pi / (n * m)) * (
            k[:, np.newaxis, np.newaxis] * l[np.newaxis, :, np.newaxis]
            * u[np.newaxis, np.newaxis, :]))
        weighted = np.transpose(
            functions[:, k.astype(int), :] * mult, (1, 0, 2))
        inner = np.matmul(weighted, cos_v)
        result += cos_u.T @ inner.reshape(k.shape[0], -1)
    terms = result.reshape(n, count, n).transpose(1, 0, 2)
    terms += functions[:, 0, 0][:, np.newaxis, np.newaxis]
    return 0.5 * (terms + terms.transpose(0, 2, 1))


def _mirror(quadrant: np.ndarray) -> np.ndarray:
    """
    Extend an even function from u, v >= 0 to the full index range.

    :param quadrant: the values for u, v in [0, N-1]
    :returns: the values for u, v in [-N+1, N-1]
    """
    rows = np.concatenate((quadrant[:0:-1], quadrant), axis=0)
    return np.concatenate((rows[:, :0:-1], rows), axis=1)


def condition_residual(params: GridParams, w: WeightMap) -> np.ndarray:
    """
    Compute the residual of the isometry condition.

    :param params: the grid parameters
    :param w: the symmetric weights
    :returns: the residual, indexed `[u + N - 1, v + N - 1]`
    """
    if w.params != params:
        raise ValueError(f"Weights are for {w.params}, not for {params}.")
    quadrant = _condition_terms(params, w.point_values[np.newaxis])[0]
    quadrant[0, 0] -= 1.0
    return _mirror(quadrant)


def condition_residual_direct(params: GridParams,
                              w: WeightMap) -> np.ndarray:
    """
    Compute the residual by summing over all indexed entries.

    Meant as an oracle for small grids only.

    :param params: the grid parameters
    :param w: the weights
    :returns: the residual, indexed `[u + N - 1, v + N - 1]`
    """
    omega_x, omega_y = frequency_grid(params)
    uv: Final[np.ndarray] = np.arange(-params.n + 1, params.n, dtype=float)
    phase: Final[np.ndarray] = (2.0 * np.pi / float(params.m0)) * (
        uv[:, np.newaxis, np.newaxis] * omega_x.reshape(1, 1, -1)
        + uv[np.newaxis, :, np.newaxis] * omega_y.reshape(1, 1, -1))
    result = np.cos(phase) @ w.values.reshape(-1)
    result[params.n - 1, params.n - 1] -= 1.0
    return result


def solve_weight_coeffs(params: GridParams, basis: WeightBasis) -> WeightMap:
    """
    Fit nonnegative basis coefficients to the isometry condition.

    :param params: the grid parameters
    :param basis: the basis
    :returns: the fitted weights
    :raises WeightFitError: if the solver fails
    """
    if not isinstance(basis, WeightBasis):
        raise type_error(basis, "basis", WeightBasis)
    with log_duration(f"fitting {len(basis)} weight coefficients of "
                      f"choice {basis.choice} for {params}"):
        terms: Final[np.ndarray] = _condition_terms(params, basis.functions)
        rows: Final[np.ndarray] = np.sqrt(_row_weights(params)).reshape(-1)
        matrix = terms.reshape(terms.shape[0], -1).T * rows[:, np.newaxis]
        target = np.zeros(matrix.shape[0])
        target[0] = 1.0
        scale = np.linalg.norm(matrix, axis=0)
        if np.any(scale <= 0) or not np.all(np.isfinite(scale)):
            raise WeightFitError(
                f"Degenerate weight system for {params}.")
        try:
            solution, rnorm = nnls(matrix / scale, target,
                                   maxiter=50 * matrix.shape[1])
        except RuntimeError as err:
            raise WeightFitError(
                f"NNLS failed for choice {basis.choice} and {params}: "
                f"{err}") from err
        if not isfinite(rnorm):
            raise WeightFitError(f"NNLS residual is {rnorm}.")
        coeffs: Final[np.ndarray] = solution / scale
        logger(f"weight fit residual {rnorm:.3e} with coefficients "
               f"{np.array2string(coeffs, precision=4)}.")
    point_values: Final[np.ndarray] = np.tensordot(
        coeffs, basis.functions, axes=1)
    return WeightMap.from_point_values(params, point_values,
                                       coeffs.tolist(), basis.choice)


def fit_weights(params: GridParams, choice: int) -> WeightMap:
    """
    Fit the weights of one of the recommended bases.

    :param params: the grid parameters
    :param choice: the basis choice
    :returns: the weights
    """
    return solve_weight_coeffs(params, weight_basis(params, choice))


def apply_weight(j: PPImage, w: WeightMap, power: float) -> PPImage:
    """
    Multiply grid data pointwise by a power of the weights.

    :param j: the grid data
    :param w: the weights
    :param power: 0.5 or 1
    :returns: the weighted data
    """
    if not isinstance(j, PPImage):
        raise type_error(j, "j", PPImage)
    if j.params != w.params:
        raise ValueError(f"Weights are for {w.params}, not for {j.params}.")
    if power == 1:
        return PPImage(j.params, j.data * w.values)
    if power == 0.5:
        return PPImage(j.params, j.data * np.sqrt(w.values))
    raise ValueError(f"power must be 0.5 or 1, but is {power}.")


def gram_apply(w: WeightMap) -> Callable[[np.ndarray], np.ndarray]:
    """
    Get the operator I -> P*wP I.

    :param w: the weights
    :returns: the operator on N x N images
    """
    params: Final[GridParams] = w.params

    def __apply(image: np.ndarray) -> np.ndarray:
        return adjoint_ppft(apply_weight(ppft(params, image), w, 1))
    return __apply


def isometry_defect(params: GridParams, w: WeightMap,
                    images: Iterable[np.ndarray],
                    reduce: str = "max") -> float:
    """
    Measure how far `P*wP` is from the identity on some images.

    :param params: the grid parameters
    :param w: the weights
    :param images: the test images
    :param reduce: `max` or `mean` of the relative errors
    :returns: the reduced relative error `||P*wP I - I|| / ||I||`
    """
    if reduce not in ("max", "mean"):
        raise ValueError(f"reduce must be 'max' or 'mean', not '{reduce}'.")
    gram: Final[Callable[[np.ndarray], np.ndarray]] = gram_apply(w)
    errors: Final[list[float]] = []
    for image in images:
        check_image(params, image)
        errors.append(float(np.linalg.norm(gram(image) - image)
                            / np.linalg.norm(image)))
    if len(errors) <= 0:
        raise ValueError("Need at least one image.")
    return max(errors) if reduce == "max" else sum(errors) / len(errors)


@dataclass(frozen=True)
class GramSpectrum:
    """The extreme eigenvalues of `P*wP`."""

    #: the largest eigenvalue
    lambda_max: float
    #: the smallest eigenvalue
    lambda_min: float
    #: did both eigenvalue iterations converge?
    converged: bool

    @property
    def condition(self) -> float:
        """The condition number `lambda_max / lambda_min`."""
        if self.lambda_min <= 0:
            return float("inf")
        return self.lambda_max / self.lambda_min


def _largest_eigenvalue(op: LinearOperator, tol: float) -> tuple[float, bool]:
    """
    Compute the largest eigenvalue of a symmetric operator.

    The Lanczos iteration starts from a fixed pseudo-random vector, so
    repeated runs give identical results.

    :param op: the operator
    :param tol: the relative tolerance
    :returns: the eigenvalue and whether the iteration converged
    """
    start: Final[np.ndarray] = np.random.Generator(
        np.random.PCG64(_EIGEN_SEED)).standard_normal(op.shape[0])
    try:
        return float(eigsh(op, k=1, which="LA", tol=tol, v0=start,
                           return_eigenvectors=False)[0]), True
    except ArpackNoConvergence as err:
        partial = np.asarray(err.eigenvalues, dtype=float)
        logger(f"eigenvalue iteration did not converge: {err}")
        return (float(partial.max()) if partial.size > 0
                else float("nan")), False


def gram_condition(params: GridParams, w: WeightMap,
                   tol: float = 1e-8) -> GramSpectrum:
    """
    Estimate the condition number of `P*wP`.

    `P*wP` maps real images to real images and is symmetric there. The
    largest eigenvalue comes from a Lanczos iteration, the smallest one
    from the largest eigenvalue of the shifted operator
    `lambda_max - P*wP`.

    :param params: the grid parameters
    :param w: the weights
    :param tol: the relative eigenvalue tolerance
    :returns: the spectrum estimate
    """
    size: Final[int] = params.n * params.n
    gram: Final[Callable[[np.ndarray], np.ndarray]] = gram_apply(w)

    def __matvec(x: np.ndarray) -> np.ndarray:
        return gram(np.reshape(x, params.image_shape)).real.reshape(-1)

    with log_duration(f"estimating cond(P*wP) for {params}"):
        op = LinearOperator((size, size), matvec=__matvec,
                            rmatvec=__matvec, dtype=float)
        lmax, ok1 = _largest_eigenvalue(op, tol)

        def __shifted(x: np.ndarray) -> np.ndarray:
            return lmax * np.reshape(x, -1) - __matvec(x)

        shifted = LinearOperator((size, size), matvec=__shifted,
                                 rmatvec=__shifted, dtype=float)
        top, ok2 = _largest_eigenvalue(shifted, tol)
    result: Final[GramSpectrum] = GramSpectrum(lmax, lmax - top, ok1 and ok2)
    logger(f"cond(P*wP) = {result.condition:.4f} with lambda in "
           f"[{result.lambda_min:.4f}, {result.lambda_max:.4f}].")
    return result


def uniform_residual_norm(params: GridParams) -> float:
    """
    Get the residual norm of the best constant point weight.

    :param params: the grid parameters
    :returns: the residual norm of the best constant
    """
    basis: Final[WeightBasis] = WeightBasis(
        params, None, ("constant", ),
        np.ones((1, ) + quarter_shape(params)))
    return residual_norm(params, solve_weight_coeffs(params, basis))


def residual_norm(params: GridParams, w: WeightMap) -> float:
    """
    Get the Frobenius norm of `P*wP - Id`.

    This is the norm of the condition residual with every offset counted
    as often as it occurs between two pixels, the quantity the fit
    minimizes.

    :param params: the grid parameters
    :param w: the weights
    :returns: the norm
    """
    return float(sqrt(np.sum(
        lag_counts(params) * condition_residual(params, w) ** 2)))
