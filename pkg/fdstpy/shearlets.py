"""
Digital shearlets on the pseudo-polar grid.

A shearlet of scale j and shear s on cone 21 (sector 2, k >= 1) is the
window

    W(4^-j * 2k/R) * V(s - 2^(j+1) l / N)

times a two-dimensional Fourier character over its rectangular block of
grid entries. The other cones mirror it. At scales j < 0 there is only
the shear s = 0 with the angular profile V0 = 1. The low-pass part lives
on the three central rows k in {-1, 0, 1} of each sector.

The radial profiles W0 and W and the angular bump V are built from a
smoothness profile nu with nu(x) + nu(1 - x) = 1, which makes the squared
windows a partition of unity over the indexed grid entries. Analysis
therefore satisfies `synthesize(analyze(J)) == J` exactly.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor
from types import MappingProxyType
from typing import Callable, Final, Iterable, Iterator, Mapping

import numpy as np

from fdstpy.grid import CONES, GridParams, c_factor_grid, cone_sector, \
    cone_sign
from fdstpy.ppft import PPImage
from fdstpy.types import check_array, check_int, type_error

#: the smoothness profile used by default
DEFAULT_PROFILE: Final[str] = "quadratic"


def _nu_quadratic(x: np.ndarray) -> np.ndarray:
    """
    Get the piecewise quadratic profile.

    :param x: the arguments, clipped to [0, 1]
    :returns: 2x^2 on [0, 1/2] and 1 - 2(1-x)^2 on [1/2, 1]
    """
    return np.where(x <= 0.5, 2.0 * x * x, 1.0 - 2.0 * (1.0 - x) ** 2)


def _nu_cubic(x: np.ndarray) -> np.ndarray:
    """
    Get the cubic smoothstep profile.

    :param x: the arguments, clipped to [0, 1]
    :returns: 3x^2 - 2x^3
    """
    return x * x * (3.0 - 2.0 * x)


def _nu_meyer(x: np.ndarray) -> np.ndarray:
    """
    Get the degree-7 profile with three vanishing derivatives at 0 and 1.

    :param x: the arguments, clipped to [0, 1]
    :returns: x^4 (35 - 84x + 70x^2 - 20x^3)
    """
    return (x ** 4) * (35.0 - x * (84.0 - x * (70.0 - 20.0 * x)))


#: the smoothness profiles by name
PROFILES: Final[Mapping[str, Callable[[np.ndarray], np.ndarray]]] = \
    MappingProxyType({"quadratic": _nu_quadratic,
                      "cubic": _nu_cubic,
                      "meyer": _nu_meyer})


@dataclass(frozen=True, init=False, order=True)
class WindowBank:
    """The radial and angular window profiles of one smoothness profile."""

    #: the name of the smoothness profile
    profile: str

    def __init__(self, profile: str = DEFAULT_PROFILE):
        """
        Create the window bank.

        :param profile: the name of the smoothness profile
        """
        if profile not in PROFILES:
            raise ValueError(f"Unknown window profile '{profile}', "
                             f"choose one of {sorted(PROFILES)}.")
        object.__setattr__(self, "profile", profile)

    def nu(self, x) -> np.ndarray:
        """
        Evaluate the smoothness profile, 0 below 0 and 1 above 1.

        :param x: the arguments
        :returns: the values
        """
        return PROFILES[self.profile](np.clip(np.asarray(x, float), 0, 1))

    def w0(self, xi) -> np.ndarray:
        """
        Evaluate the radial scaling profile, supported on [-1, 1].

        :param xi: the arguments
        :returns: the values
        """
        a: Final[np.ndarray] = np.abs(np.asarray(xi, float))
        inner: Final[np.ndarray] = np.cos(
            (0.5 * np.pi) * self.nu((4.0 * a - 1.0) / 3.0))
        return np.where(a <= 0.25, 1.0, np.where(a < 1.0, inner, 0.0))

    def w(self, xi) -> np.ndarray:
        """
        Evaluate the radial wavelet profile, supported on 1/4 <= |xi| <= 4.

        :param xi: the arguments
        :returns: the values
        """
        a: Final[np.ndarray] = np.abs(np.asarray(xi, float))
        rising: Final[np.ndarray] = np.sin(
            (0.5 * np.pi) * self.nu((4.0 * a - 1.0) / 3.0))
        falling: Final[np.ndarray] = np.cos(
            (0.5 * np.pi) * self.nu((a - 1.0) / 3.0))
        return np.where((a > 0.25) & (a <= 1.0), rising,
                        np.where((a > 1.0) & (a < 4.0), falling, 0.0))

    def v(self, xi) -> np.ndarray:
        """
        Evaluate the angular bump, supported on [-1, 1].

        The squared integer translates of the bump sum to one.

        :param xi: the arguments
        :returns: the values
        """
        x: Final[np.ndarray] = np.asarray(xi, float)
        sq: Final[np.ndarray] = self.nu(1.0 + x) + self.nu(1.0 - x) - 1.0
        return np.where(np.abs(x) < 1.0, np.sqrt(np.maximum(sq, 0.0)), 0.0)

    def v0(self, xi) -> np.ndarray:
        """
        Evaluate the constant angular profile of the coarse scales.

        :param xi: the arguments
        :returns: ones
        """
        return np.ones_like(np.asarray(xi, float))


def build_window_bank(profile: str = DEFAULT_PROFILE) -> WindowBank:
    """
    Create the window bank of a smoothness profile.

    :param profile: the profile name
    :returns: the window bank

    >>> bank = build_window_bank()
    >>> float(bank.nu(0.5)), float(bank.w0(0.0)), float(bank.w(1.0))
    (0.5, 1.0, 1.0)
    """
    return WindowBank(profile)


@dataclass(frozen=True, init=False, order=True)
class SubbandIndex:
    """The cone, scale, and shear of a subband."""

    #: the cone (11, 12, 21, 22) or the low-pass sector (1, 2)
    iota: int
    #: the scale
    j: int
    #: the shear
    s: int

    def __init__(self, iota: int, j: int, s: int):
        """
        Create the subband index.

        :param iota: the cone or the low-pass sector
        :param j: the scale
        :param s: the shear
        """
        iota = check_int(iota, "iota")
        if (iota not in CONES) and (iota not in (1, 2)):
            raise ValueError(f"iota must be a cone or 1 or 2, not {iota}.")
        object.__setattr__(self, "iota", iota)
        object.__setattr__(self, "j", check_int(j, "j"))
        object.__setattr__(self, "s", check_int(s, "s"))

    @property
    def is_low(self) -> bool:
        """Is this one of the two low-pass blocks?"""
        return self.iota in (1, 2)

    @property
    def sector(self) -> int:
        """The grid sector of the subband."""
        return self.iota if self.is_low else cone_sector(self.iota)


@dataclass(frozen=True)
class SubbandGeometry:
    """The position of a subband block on the grid."""

    #: the subband
    index: SubbandIndex
    #: the radial index of block row 0
    k_first: int
    #: the angular index of block column 0
    l_first: int
    #: the number of block rows
    l1: int
    #: the number of block columns
    l2: int
    #: the first block row inside the grid
    row_start: int
    #: the end of the block rows inside the grid
    row_stop: int

    @property
    def shape(self) -> tuple[int, int]:
        """The block shape."""
        return self.l1, self.l2

    @property
    def k_range(self) -> tuple[int, int]:
        """The first and last radial index."""
        return self.k_first, self.k_first + self.l1 - 1

    @property
    def l_range(self) -> tuple[int, int]:
        """The first and last angular index."""
        return self.l_first, self.l_first + self.l2 - 1

    def grid_slices(self, params: GridParams) -> tuple[int, slice, slice]:
        """
        Get the grid positions of the in-grid block rows.

        :param params: the grid parameters
        :returns: sector position, row slice, and column slice into a grid
            array
        """
        row: Final[int] = self.k_first + self.row_start + params.k_max
        col: Final[int] = self.l_first + params.l_max
        return (self.index.sector - 1,
                slice(row, row + self.row_stop - self.row_start),
                slice(col, col + self.l2))


def shears(params: GridParams, j: int) -> range:
    """
    Get the shears of a scale.

    :param params: the grid parameters
    :param j: the scale
    :returns: `-2^j..2^j` for j >= 0 and only 0 otherwise
    """
    check_int(j, "j", params.j_low, params.j_high)
    return range(-(1 << j), (1 << j) + 1) if j >= 0 else range(1)


def radial_range(params: GridParams, j: int) -> tuple[int, int]:
    """
    Get the positive radial indices covered by a scale.

    The window W(4^-j 2k/R) is nonzero for 4^(j-1) R/2 < k < 4^(j+1) R/2.
    The coarsest scale starts at k = 1 and the finest ends at k = RN/2.

    :param params: the grid parameters
    :param j: the scale
    :returns: the first and last radial index
    """
    check_int(j, "j", params.j_low, params.j_high)
    half_r: Final[Fraction] = Fraction(params.r, 2)
    lo: Final[int] = 1 if j == params.j_low \
        else ceil(Fraction(4) ** (j - 1) * half_r)
    hi: Final[int] = params.k_max if j == params.j_high \
        else floor(Fraction(4) ** (j + 1) * half_r)
    return lo, hi


def angular_range(params: GridParams, j: int, s: int) -> tuple[int, int]:
    """
    Get the angular indices covered by a shear.

    :param params: the grid parameters
    :param j: the scale
    :param s: the shear
    :returns: the first and last angular index
    """
    if s not in shears(params, j):
        raise ValueError(f"Shear {s} does not exist at scale {j}.")
    if j < 0:
        return -params.l_max, params.l_max
    step: Final[int] = params.n >> (j + 1)
    return max(-params.l_max, step * (s - 1)), \
        min(params.l_max, step * (s + 1))


def subband_geometry(params: GridParams,
                     index: SubbandIndex) -> SubbandGeometry:
    """
    Compute the block geometry of a subband.

    :param params: the grid parameters
    :param index: the subband
    :returns: the geometry
    :raises ValueError: if the subband does not exist
    """
    if not isinstance(index, SubbandIndex):
        raise type_error(index, "index", SubbandIndex)
    if index.is_low:
        if (index.j != params.j_low - 1) or (index.s != 0):
            raise ValueError(f"Invalid low-pass subband {index}.")
        return SubbandGeometry(index, -1, -params.l_max, 3,
                               params.angular_size, 0, 3)
    if not params.j_low <= index.j <= params.j_high:
        raise ValueError(f"Scale {index.j} of {index} is not in "
                         f"[{params.j_low}, {params.j_high}].")
    lo, hi = radial_range(params, index.j)
    l_lo, l_hi = angular_range(params, index.j, index.s)
    l1: Final[int] = hi - lo + 1
    if cone_sign(index.iota) > 0:
        return SubbandGeometry(index, lo, l_lo, l1, l_hi - l_lo + 1, 0,
                               min(l1, params.k_max - lo + 1))
    return SubbandGeometry(index, -hi, l_lo, l1, l_hi - l_lo + 1,
                           max(0, hi - params.k_max), l1)


@lru_cache(maxsize=16)
def scale_shear_table(params: GridParams) -> tuple[SubbandGeometry, ...]:
    """
    Enumerate all subbands of the grid with their block geometry.

    The two low-pass blocks come first, then the cones 11, 12, 21, and 22,
    each by increasing scale and shear.

    :param params: the grid parameters
    :returns: the geometries in canonical order
    """
    result: list[SubbandGeometry] = [
        subband_geometry(params, SubbandIndex(sector, params.j_low - 1, 0))
        for sector in (1, 2)]
    for cone in CONES:
        for j in range(params.j_low, params.j_high + 1):
            result.extend(subband_geometry(params, SubbandIndex(cone, j, s))
                          for s in shears(params, j))
    return tuple(result)


@dataclass(frozen=True, init=False, eq=False)
class SubbandBlock:
    """The window values of a subband over its block."""

    #: the geometry of the block
    geometry: SubbandGeometry
    #: the real window values, of shape `geometry.shape`
    values: np.ndarray

    def __init__(self, geometry: SubbandGeometry, values: np.ndarray):
        """
        Create the window block.

        :param geometry: the geometry
        :param values: the values
        """
        check_array(values, "values", geometry.shape)
        values.setflags(write=False)
        object.__setattr__(self, "geometry", geometry)
        object.__setattr__(self, "values", values)

    @property
    def index(self) -> SubbandIndex:
        """The subband."""
        return self.geometry.index


def shearlet_window(params: GridParams, bank: WindowBank,
                    index: SubbandIndex,
                    boundary_factor: bool = False) -> SubbandBlock:
    """
    Sample the window of a subband on its block.

    By default (`boundary_factor=False`) the block omits the boundary
    factor C of duplicated grid points, so it is not the digital shearlet
    itself: the transform folds C^2 into its weights instead. Pass `True`
    for the digital shearlet `C * window`, as :func:`shearlet_atom` does.

    :param params: the grid parameters
    :param bank: the window profiles
    :param index: the subband
    :param boundary_factor: multiply by C?
    :returns: the window block, zero on rows outside the grid
    """
    geometry: Final[SubbandGeometry] = subband_geometry(params, index)
    k: Final[np.ndarray] = geometry.k_first + np.arange(geometry.l1)
    l: Final[np.ndarray] = geometry.l_first + np.arange(  # noqa: E741
        geometry.l2)
    if index.is_low:
        radial = bank.w0((4.0 ** -params.j_low) * 2.0 * np.abs(k) / params.r)
        angular = bank.v0(l)
    else:
        radial = bank.w((4.0 ** -index.j) * 2.0 * np.abs(k) / params.r)
        argument = index.s - (2.0 ** (index.j + 1)) * l / params.n
        angular = bank.v(argument) if index.j >= 0 else bank.v0(argument)
    radial = np.where(np.abs(k) <= params.k_max, radial, 0.0)
    values = np.outer(radial, angular)
    if boundary_factor:
        sector, rows, cols = geometry.grid_slices(params)
        values[geometry.row_start:geometry.row_stop] *= \
            c_factor_grid(params)[sector, rows, cols]
    return SubbandBlock(geometry, values)


@dataclass(frozen=True, init=False, eq=False)
class WindowTable:
    """The precomputed windows of all subbands of a grid."""

    #: the grid parameters
    params: GridParams
    #: the window profiles
    bank: WindowBank
    #: the windows in canonical order
    blocks: tuple[SubbandBlock, ...]

    def __init__(self, params: GridParams, bank: WindowBank):
        """
        Compute all windows.

        :param params: the grid parameters
        :param bank: the window profiles
        """
        if not isinstance(bank, WindowBank):
            raise type_error(bank, "bank", WindowBank)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "bank", bank)
        object.__setattr__(self, "blocks", tuple(
            shearlet_window(params, bank, g.index)
            for g in scale_shear_table(params)))

    def __iter__(self) -> Iterator[SubbandBlock]:
        """
        Iterate over the window blocks.

        :return: the iterator
        """
        return iter(self.blocks)

    def __len__(self) -> int:
        """
        Get the number of subbands.

        :return: the number of subbands
        """
        return len(self.blocks)


class ShearletCoefficients:
    """The coefficients of all subbands of one transform."""

    def __init__(self, params: GridParams,
                 blocks: Mapping[SubbandIndex, np.ndarray]):
        """
        Create the coefficient set.

        :param params: the grid parameters
        :param blocks: one coefficient array per subband of the grid
        """
        if not isinstance(params, GridParams):
            raise type_error(params, "params", GridParams)
        table: Final[tuple[SubbandGeometry, ...]] = scale_shear_table(params)
        if len(blocks) != len(table):
            raise ValueError(f"Expected {len(table)} subbands, but got "
                             f"{len(blocks)}.")
        ordered: dict[SubbandIndex, np.ndarray] = {}
        for g in table:
            if g.index not in blocks:
                raise ValueError(f"Subband {g.index} is missing.")
            ordered[g.index] = check_array(
                blocks[g.index], f"block {g.index}", g.shape)
        #: the grid parameters
        self.params: Final[GridParams] = params
        #: the coefficient blocks in canonical order
        self.blocks: Final[Mapping[SubbandIndex, np.ndarray]] = \
            MappingProxyType(ordered)

    @staticmethod
    def zeros(params: GridParams) -> "ShearletCoefficients":
        """
        Create an all-zero coefficient set.

        :param params: the grid parameters
        :returns: the coefficients
        """
        return ShearletCoefficients(params, {
            g.index: np.zeros(g.shape, complex)
            for g in scale_shear_table(params)})

    def __getitem__(self, index: SubbandIndex) -> np.ndarray:
        """
        Get the coefficients of a subband.

        :param index: the subband
        :return: the coefficient block
        """
        return self.blocks[index]

    def __iter__(self) -> Iterator[SubbandIndex]:
        """
        Iterate over the subbands in canonical order.

        :return: the iterator
        """
        return iter(self.blocks)

    @property
    def low(self) -> tuple[np.ndarray, np.ndarray]:
        """The two low-pass blocks."""
        j: Final[int] = self.params.j_low - 1
        return (self.blocks[SubbandIndex(1, j, 0)],
                self.blocks[SubbandIndex(2, j, 0)])

    @property
    def count(self) -> int:
        """The total number of coefficients."""
        return sum(b.size for b in self.blocks.values())

    def norm(self) -> float:
        """
        Get the Euclidean norm of all coefficients.

        :return: the norm
        """
        return float(np.sqrt(sum(np.vdot(b, b).real
                                 for b in self.blocks.values())))

    def inner(self, other: "ShearletCoefficients") -> complex:
        """
        Get the inner product, linear in this set.

        :param other: the other coefficients
        :return: the sum of `self * conj(other)`
        """
        if other.params != self.params:
            raise ValueError("Coefficient geometries differ.")
        return complex(sum(np.vdot(other.blocks[i], b)
                           for i, b in self.blocks.items()))

    def flatten(self) -> np.ndarray:
        """
        Concatenate all coefficients in canonical order.

        :return: the coefficient vector
        """
        return np.concatenate([b.reshape(-1) for b in self.blocks.values()])

    def with_flat(self, vector: np.ndarray) -> "ShearletCoefficients":
        """
        Create coefficients of the same geometry from a flat vector.

        :param vector: the vector, as returned by :meth:`flatten`
        :return: the new coefficients
        """
        check_array(vector, "vector", (self.count, ))
        blocks: dict[SubbandIndex, np.ndarray] = {}
        start: int = 0
        for i, b in self.blocks.items():
            blocks[i] = vector[start:start + b.size].reshape(b.shape)
            start += b.size
        return ShearletCoefficients(self.params, blocks)

    def map_blocks(self, fn: Callable[[SubbandIndex, np.ndarray],
                                      np.ndarray]) -> "ShearletCoefficients":
        """
        Apply a function to every block.

        :param fn: the function receiving the subband and its block
        :return: the new coefficients
        """
        return ShearletCoefficients(self.params, {
            i: fn(i, b) for i, b in self.blocks.items()})

    def select(self, j: int,
               cones: Iterable[int] = CONES) -> Iterator[SubbandIndex]:
        """
        Iterate over the subbands of one scale.

        :param j: the scale
        :param cones: the cones to include
        :return: the subbands
        """
        cone_set: Final[set[int]] = set(cones)
        return (i for i in self.blocks
                if (not i.is_low) and (i.j == j) and (i.iota in cone_set))


def analyze_block(jw: PPImage, block: SubbandBlock) -> np.ndarray:
    """
    Window grid data on one subband block and transform the block.

    :param jw: the weighted grid data
    :param block: the window block
    :returns: the coefficient block
    """
    g: Final[SubbandGeometry] = block.geometry
    x: Final[np.ndarray] = np.zeros(g.shape, complex)
    x[g.row_start:g.row_stop] = jw.data[g.grid_slices(jw.params)]
    return np.fft.ifft2(x * block.values, norm="ortho")


def analyze(jw: PPImage, table: WindowTable) -> ShearletCoefficients:
    """
    Window grid data into subband blocks and transform each block.

    :param jw: the weighted grid data
    :param table: the windows
    :returns: the coefficients
    """
    if not isinstance(jw, PPImage):
        raise type_error(jw, "jw", PPImage)
    if jw.params != table.params:
        raise ValueError(f"Grid data is for {jw.params}, windows are for "
                         f"{table.params}.")
    return ShearletCoefficients(table.params, {
        block.index: analyze_block(jw, block) for block in table})


def synthesize(c: ShearletCoefficients, table: WindowTable) -> PPImage:
    """
    Transform each subband block back and accumulate it on the grid.

    This is the adjoint of :func:`analyze`.

    :param c: the coefficients
    :param table: the windows
    :returns: the grid data
    """
    if not isinstance(c, ShearletCoefficients):
        raise type_error(c, "c", ShearletCoefficients)
    if c.params != table.params:
        raise ValueError(f"Coefficients are for {c.params}, windows are "
                         f"for {table.params}.")
    result: Final[np.ndarray] = np.zeros(table.params.shape, complex)
    for block in table:
        g = block.geometry
        y = np.fft.fft2(c[g.index], norm="ortho") * block.values
        result[g.grid_slices(table.params)] += y[g.row_start:g.row_stop]
    return PPImage(table.params, result)


def partition_of_unity(table: WindowTable) -> np.ndarray:
    """
    Sum the squared windows over all subbands per indexed grid entry.

    :param table: the windows
    :returns: the sums, of shape `params.shape`
    """
    result: Final[np.ndarray] = np.zeros(table.params.shape)
    for block in table:
        g = block.geometry
        result[g.grid_slices(table.params)] += \
            block.values[g.row_start:g.row_stop] ** 2
    return result


def shearlet_atom(params: GridParams, bank: WindowBank,
                  index: SubbandIndex, m: tuple[int, int]) -> PPImage:
    """
    Evaluate a digital shearlet directly on the grid.

    The atom is `C * window * exp(-2 pi i (m1 r1 / L1 + m2 r2 / L2))
    / sqrt(L1 L2)`, where `(r1, r2)` is the position inside the block.

    :param params: the grid parameters
    :param bank: the window profiles
    :param index: the subband
    :param m: the translation
    :returns: the atom on all indexed entries
    """
    block: Final[SubbandBlock] = shearlet_window(params, bank, index, True)
    g: Final[SubbandGeometry] = block.geometry
    r1: Final[np.ndarray] = np.arange(g.l1)[:, np.newaxis]
    r2: Final[np.ndarray] = np.arange(g.l2)[np.newaxis, :]
    character: Final[np.ndarray] = np.exp(-2j * np.pi * (
        (m[0] * r1) / g.l1 + (m[1] * r2) / g.l2)) / np.sqrt(g.l1 * g.l2)
    result: Final[np.ndarray] = np.zeros(params.shape, complex)
    result[g.grid_slices(params)] = (block.values * character)[
        g.row_start:g.row_stop]
    return PPImage(params, result)
