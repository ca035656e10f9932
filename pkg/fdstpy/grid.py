"""
The oversampled pseudo-polar frequency grid.

The grid consists of two sectors. Sector 1 holds the points

    (-(2k/R)(2l/N), 2k/R),

which cover the "vertical" frequencies |omega_x| <= |omega_y|. Sector 2
holds the transposed points

    (2k/R, -(2k/R)(2l/N)),

with the radial index k in [-RN/2, RN/2] and the angular (slope) index l in
[-N/2, N/2]. All entries with k = 0 collapse onto the center, and the
entries with |l| = N/2 are the seam lines |omega_x| = |omega_y| that both
sectors share. These duplicates are kept as distinct indexed entries.

Arrays on the grid are indexed `[sector - 1, k + RN/2, l + N/2]`.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2, sqrt
from typing import Final, Iterator

import numpy as np

from fdstpy.types import check_float, check_int

#: the cone with sector 1 and positive radial index
CONE_11: Final[int] = 11
#: the cone with sector 1 and negative radial index
CONE_12: Final[int] = 12
#: the cone with sector 2 and positive radial index
CONE_21: Final[int] = 21
#: the cone with sector 2 and negative radial index
CONE_22: Final[int] = 22
#: the "quadrant" of the center point
CENTER: Final[int] = 0
#: all four cones
CONES: Final[tuple[int, int, int, int]] = (CONE_11, CONE_12, CONE_21, CONE_22)

#: the point class of interior points
KIND_INTERIOR: Final[str] = "interior"
#: the point class of points on the seam lines
KIND_SEAM: Final[str] = "seam"
#: the point class of the center
KIND_CENTER: Final[str] = "center"


@dataclass(frozen=True, init=False, order=True)
class GridParams:
    """The size of the image and the oversampling of the grid."""

    #: the image side length, a power of two, at least 4
    n: int
    #: the radial oversampling rate, an even number, at least 2
    r: int

    def __init__(self, n: int, r: int = 8):
        """
        Create the grid parameters.

        :param n: the image side length
        :param r: the radial oversampling rate
        """
        n = check_int(n, "n", 4)
        if (n & (n - 1)) != 0:
            raise ValueError(f"n must be a power of two, but is {n}.")
        r = check_int(r, "r", 2)
        if (r % 2) != 0:
            raise ValueError(f"r must be even, but is {r}.")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)

    @property
    def m0(self) -> Fraction:
        """The Fourier denominator (2/R)(RN+1), always larger than N."""
        return Fraction(2 * self.radial_size, self.r)

    @property
    def radial_size(self) -> int:
        """The number RN+1 of radial indices per sector."""
        return (self.r * self.n) + 1

    @property
    def angular_size(self) -> int:
        """The number N+1 of angular indices per sector."""
        return self.n + 1

    @property
    def k_max(self) -> int:
        """The largest radial index RN/2."""
        return (self.r * self.n) // 2

    @property
    def l_max(self) -> int:
        """The largest angular index N/2."""
        return self.n // 2

    @property
    def shape(self) -> tuple[int, int, int]:
        """The shape of an array on the grid."""
        return 2, self.radial_size, self.angular_size

    @property
    def image_shape(self) -> tuple[int, int]:
        """The shape of an image."""
        return self.n, self.n

    @property
    def log2_n(self) -> int:
        """The exponent n0 with N = 2^n0."""
        return int(round(log2(self.n)))

    @property
    def j_low(self) -> int:
        """The coarsest scale -ceil(log4(R/2))."""
        return -int(ceil(log2(self.r // 2) / 2))

    @property
    def j_high(self) -> int:
        """The finest scale ceil(log4(N))."""
        return int(ceil(self.log2_n / 2))

    def __str__(self) -> str:
        """
        Get a short description of the parameters.

        :return: the description
        """
        return f"N={self.n}, R={self.r}"


@dataclass(frozen=True, init=False, order=True)
class GridPoint:
    """An indexed entry of the pseudo-polar grid and its coordinates."""

    #: the sector, 1 or 2
    sector: int
    #: the radial index
    k: int
    #: the angular index
    l: int  # noqa: E741
    #: the horizontal frequency
    omega_x: float
    #: the vertical frequency
    omega_y: float

    def __init__(self, sector: int, k: int, l: int,  # noqa: E741
                 omega_x: float, omega_y: float):
        """
        Create the grid point.

        :param sector: the sector
        :param k: the radial index
        :param l: the angular index
        :param omega_x: the horizontal frequency
        :param omega_y: the vertical frequency
        """
        object.__setattr__(self, "sector", check_int(sector, "sector", 1, 2))
        object.__setattr__(self, "k", check_int(k, "k"))
        object.__setattr__(self, "l", check_int(l, "l"))
        object.__setattr__(self, "omega_x", check_float(omega_x, "omega_x"))
        object.__setattr__(self, "omega_y", check_float(omega_y, "omega_y"))


@dataclass(frozen=True, init=False)
class PointClass:
    """The class of a grid point and its boundary factor C."""

    #: the kind: `interior`, `seam`, or `center`
    kind: str
    #: the boundary factor
    c_factor: float

    def __init__(self, kind: str, c_factor: float):
        """
        Create the point class.

        :param kind: the kind of point
        :param c_factor: the boundary factor
        """
        if kind not in (KIND_INTERIOR, KIND_SEAM, KIND_CENTER):
            raise ValueError(f"Invalid point kind '{kind}'.")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "c_factor",
                           check_float(c_factor, "c_factor", 0.0, True))


def _check_index(params: GridParams, sector: int, k: int,
                 l: int) -> None:  # noqa: E741
    """
    Check an index triple.

    :param params: the grid parameters
    :param sector: the sector
    :param k: the radial index
    :param l: the angular index
    """
    check_int(sector, "sector", 1, 2)
    check_int(k, "k", -params.k_max, params.k_max)
    check_int(l, "l", -params.l_max, params.l_max)


def grid_point(params: GridParams, sector: int, k: int,
               l: int) -> GridPoint:  # noqa: E741
    """
    Compute the grid point of an index triple.

    :param params: the grid parameters
    :param sector: the sector, 1 or 2
    :param k: the radial index in [-RN/2, RN/2]
    :param l: the angular index in [-N/2, N/2]
    :returns: the grid point
    :raises ValueError: if an index is out of range

    >>> p = grid_point(GridParams(4, 2), 1, 2, 1)
    >>> (p.omega_x, p.omega_y)
    (-1.0, 2.0)
    >>> p = grid_point(GridParams(4, 2), 2, 2, 1)
    >>> (p.omega_x, p.omega_y)
    (2.0, -1.0)
    """
    _check_index(params, sector, k, l)
    radial: Final[float] = (2.0 * k) / params.r
    angular: Final[float] = -(radial * 2.0 * l) / params.n + 0.0
    if sector == 1:
        return GridPoint(sector, k, l, angular, radial)
    return GridPoint(sector, k, l, radial, angular)


def classify(params: GridParams, p: GridPoint) -> PointClass:
    """
    Classify a grid point as interior, seam, or center point.

    :param params: the grid parameters
    :param p: the grid point
    :returns: the point class with its boundary factor

    >>> g = GridParams(4, 2)
    >>> classify(g, grid_point(g, 1, 0, 1)).kind
    'center'
    >>> classify(g, grid_point(g, 2, 1, 2)).kind
    'seam'
    """
    _check_index(params, p.sector, p.k, p.l)
    if p.k == 0:
        return PointClass(KIND_CENTER, 1.0 / sqrt(2 * params.angular_size))
    if abs(p.l) == params.l_max:
        return PointClass(KIND_SEAM, 1.0 / sqrt(2.0))
    return PointClass(KIND_INTERIOR, 1.0)


def quadrant_of(params: GridParams, p: GridPoint) -> int:
    """
    Get the cone of a grid point.

    :param params: the grid parameters
    :param p: the grid point
    :returns: one of `CONE_11`, `CONE_12`, `CONE_21`, `CONE_22`, or
        `CENTER`

    >>> g = GridParams(8, 2)
    >>> quadrant_of(g, grid_point(g, 2, 3, 0))
    21
    >>> quadrant_of(g, grid_point(g, 1, -1, 2))
    12
    """
    _check_index(params, p.sector, p.k, p.l)
    if p.k == 0:
        return CENTER
    return (10 * p.sector) + (1 if p.k > 0 else 2)


def cone_sector(cone: int) -> int:
    """
    Get the sector of a cone.

    :param cone: the cone
    :returns: the sector, 1 or 2
    """
    if cone not in CONES:
        raise ValueError(f"Invalid cone {cone}.")
    return cone // 10


def cone_sign(cone: int) -> int:
    """
    Get the sign of the radial indices of a cone.

    :param cone: the cone
    :returns: 1 or -1
    """
    if cone not in CONES:
        raise ValueError(f"Invalid cone {cone}.")
    return 1 if (cone % 10) == 1 else -1


def index_arrays(params: GridParams) -> tuple[np.ndarray, np.ndarray]:
    """
    Get the radial and angular indices broadcast to the grid shape.

    :param params: the grid parameters
    :returns: the arrays `k` and `l`, both of shape `params.shape`
    """
    k = np.arange(-params.k_max, params.k_max + 1)
    l = np.arange(-params.l_max, params.l_max + 1)  # noqa: E741
    kk, ll = np.meshgrid(k, l, indexing="ij")
    return (np.broadcast_to(kk, params.shape),
            np.broadcast_to(ll, params.shape))


def frequency_grid(params: GridParams) -> tuple[np.ndarray, np.ndarray]:
    """
    Compute the coordinates of all indexed grid entries.

    :param params: the grid parameters
    :returns: the arrays `omega_x` and `omega_y` of shape `params.shape`
    """
    k, l = index_arrays(params)  # noqa: E741
    radial = (2.0 * k[0]) / params.r
    angular = -(radial * 2.0 * l[0]) / params.n
    return (np.stack((angular, radial)) + 0.0,
            np.stack((radial, angular)) + 0.0)


def multiplicity_grid(params: GridParams) -> np.ndarray:
    """
    Count how often the point of each indexed entry occurs on the grid.

    :param params: the grid parameters
    :returns: 2(N+1) on the center, 2 on the seams, and 1 elsewhere
    """
    k, l = index_arrays(params)  # noqa: E741
    result = np.ones(params.shape)
    result[np.abs(l) == params.l_max] = 2.0
    result[k == 0] = 2.0 * params.angular_size
    return result


def c_factor_grid(params: GridParams) -> np.ndarray:
    """
    Compute the boundary factor C of every indexed entry.

    :param params: the grid parameters
    :returns: the factors, with `c_factor_grid(p) ** 2 *
        multiplicity_grid(p) == 1`
    """
    return 1.0 / np.sqrt(multiplicity_grid(params))


def locate(params: GridParams, omega_x: float,
           omega_y: float) -> tuple[int, int, int] | None:
    """
    Find an index triple for frequency coordinates.

    :param params: the grid parameters
    :param omega_x: the horizontal frequency
    :param omega_y: the vertical frequency
    :returns: `(sector, k, l)` of the first matching entry, or `None` if the
        coordinates are no grid point
    """
    sector: Final[int] = 1 if abs(omega_y) >= abs(omega_x) else 2
    radial: Final[float] = omega_y if sector == 1 else omega_x
    other: Final[float] = omega_x if sector == 1 else omega_y
    k_real: Final[float] = (radial * params.r) / 2.0
    k: Final[int] = int(round(k_real))
    if (abs(k_real - k) > 1e-9) or (abs(k) > params.k_max):
        return None
    if k == 0:
        return (sector, 0, 0) if abs(other) <= 1e-9 else None
    l_real: Final[float] = -(other * params.n) / (2.0 * radial)
    l: Final[int] = int(round(l_real))  # noqa: E741
    if (abs(l_real - l) > 1e-9) or (abs(l) > params.l_max):
        return None
    return sector, k, l


def enumerate_points(params: GridParams, sector: int) -> Iterator[GridPoint]:
    """
    Iterate over all grid points of a sector, for small grids only.

    :param params: the grid parameters
    :param sector: the sector
    :returns: an iterator over (RN+1)(N+1) points
    """
    check_int(sector, "sector", 1, 2)
    for k in range(-params.k_max, params.k_max + 1):
        for l in range(-params.l_max, params.l_max + 1):  # noqa: E741
            yield grid_point(params, sector, k, l)
