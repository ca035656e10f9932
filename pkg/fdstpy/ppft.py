"""
The fast pseudo-polar Fourier transform and its adjoint.

For an N x N image I, indexed `[u + N/2, v + N/2]`, the transform evaluates

    I^(omega_x, omega_y) = sum_{u,v} I(u,v) exp(-2 pi i (u omega_x
                                                + v omega_y) / m0)

at every indexed entry of the pseudo-polar grid, with m0 = (2/R)(RN+1).
In sector 1 this reads

    sum_u exp(2 pi i u l k / ((RN+1) N/2)) sum_v I(u,v) exp(-2 pi i v k
                                                           / (RN+1)),

so the inner sum is a centered FFT of the image zero-padded to RN+1 along
v, and the outer sum is a fractional FFT along u with a fraction depending
on k. Sector 2 applies the same steps to the transposed image.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Final

import numpy as np

from fdstpy.frft import (
    FrftPlan,
    fft1_unaliased,
    fft1_unaliased_adjoint,
    pad,
    pad_adjoint,
)
from fdstpy.grid import GridParams, frequency_grid
from fdstpy.types import check_array, type_error


@dataclass(frozen=True, init=False, eq=False)
class PPImage:
    """Complex data on the indexed entries of the pseudo-polar grid."""

    #: the grid parameters
    params: GridParams
    #: the data, indexed `[sector - 1, k + RN/2, l + N/2]`
    data: np.ndarray

    def __init__(self, params: GridParams, data: np.ndarray):
        """
        Create the grid data.

        :param params: the grid parameters
        :param data: the data array of shape `params.shape`
        """
        if not isinstance(params, GridParams):
            raise type_error(params, "params", GridParams)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "data", check_array(
            data, "data", params.shape))

    def norm(self) -> float:
        """
        Get the Euclidean norm over all indexed entries.

        :return: the norm
        """
        return float(np.linalg.norm(self.data))


def check_image(params: GridParams, image: np.ndarray) -> np.ndarray:
    """
    Check that an array is an image fitting to the grid parameters.

    :param params: the grid parameters
    :param image: the image
    :returns: the image
    """
    return check_array(image, "image", params.image_shape)


@lru_cache(maxsize=8)
def _frft_plan(params: GridParams) -> FrftPlan:
    """
    Get the shared fractional FFT plan of a grid.

    Row `k + RN/2` uses the fraction -k / ((RN+1) N/2).

    :param params: the grid parameters
    :returns: the plan
    """
    k: Final[np.ndarray] = np.arange(-params.k_max, params.k_max + 1)
    return FrftPlan(params.angular_size,
                    -k / (params.radial_size * params.l_max))


def _sector(params: GridParams, image: np.ndarray) -> np.ndarray:
    """
    Compute the transform on sector 1.

    :param params: the grid parameters
    :param image: the image
    :returns: the array indexed `[k + RN/2, l + N/2]`
    """
    f = fft1_unaliased(pad(image, params.radial_size, axis=1), axis=1)
    f = pad(f, params.angular_size, axis=0)
    return _frft_plan(params).apply(np.ascontiguousarray(f.T))


def _sector_adjoint(params: GridParams, data: np.ndarray) -> np.ndarray:
    """
    Compute the adjoint of the transform on sector 1.

    :param params: the grid parameters
    :param data: the array indexed `[k + RN/2, l + N/2]`
    :returns: the image
    """
    g = _frft_plan(params).apply_adjoint(data)
    g = pad_adjoint(np.ascontiguousarray(g.T), params.n, axis=0)
    g = fft1_unaliased_adjoint(g, axis=1)
    return pad_adjoint(g, params.n, axis=1)


def ppft(params: GridParams, image: np.ndarray) -> PPImage:
    """
    Compute the pseudo-polar Fourier transform of an image.

    :param params: the grid parameters
    :param image: the N x N image
    :returns: the transform on all indexed grid entries
    """
    check_image(params, image)
    return PPImage(params, np.stack((_sector(params, image),
                                     _sector(params, image.T))))


def adjoint_ppft(j: PPImage) -> np.ndarray:
    """
    Compute the adjoint pseudo-polar Fourier transform.

    The adjoint sums over all indexed entries, duplicates included:

        P*J(u,v) = sum J(omega) exp(2 pi i (u omega_x + v omega_y) / m0).

    :param j: the data on the grid
    :returns: the N x N image
    """
    if not isinstance(j, PPImage):
        raise type_error(j, "j", PPImage)
    params: Final[GridParams] = j.params
    return _sector_adjoint(params, j.data[0]) \
        + _sector_adjoint(params, j.data[1]).T


def ppft_matrix(params: GridParams) -> np.ndarray:
    """
    Build the explicit matrix of the pseudo-polar Fourier transform.

    Meant as an oracle for small grids only.

    :param params: the grid parameters
    :returns: the matrix mapping flattened images to flattened grid data
    """
    omega_x, omega_y = frequency_grid(params)
    u: Final[np.ndarray] = np.arange(-params.l_max, params.l_max,
                                     dtype=float)
    phase: Final[np.ndarray] = \
        omega_x.reshape(-1, 1, 1) * u[np.newaxis, :, np.newaxis] \
        + omega_y.reshape(-1, 1, 1) * u[np.newaxis, np.newaxis, :]
    return np.exp((-2j * np.pi / float(params.m0)) * phase).reshape(
        phase.shape[0], -1)


def ppft_direct(params: GridParams, image: np.ndarray) -> PPImage:
    """
    Compute the pseudo-polar Fourier transform by its defining sum.

    :param params: the grid parameters
    :param image: the N x N image
    :returns: the transform
    """
    check_image(params, image)
    return PPImage(params, (ppft_matrix(params) @ image.reshape(-1)).reshape(
        params.shape))
