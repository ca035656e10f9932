"""
Unaliased Fourier kernels: the fractional FFT, centered FFTs, and padding.

All vectors use centered indexing: a vector of odd length M+1 is indexed by
j in [-M/2, M/2], a vector of even length N by j in [-N/2, N/2 - 1]. The
shifting needed by :mod:`numpy.fft` happens inside this module only.

The fractional Fourier transform

    (F^alpha c)(k) = sum_j c(j) exp(-2 pi i j k alpha)

is evaluated with the chirp-z (Bluestein) factorization

    exp(-2 pi i j k alpha)
        = exp(-pi i alpha j^2) exp(-pi i alpha k^2) exp(pi i alpha (k-j)^2),

which turns the sum into a convolution carried out by zero-padded FFTs of
a power-of-two length.
"""
from typing import Final

import numpy as np
import numpy.typing as npt

from fdstpy.types import check_array, check_int


def _fft_length(length: int) -> int:
    """
    Get the power of two FFT length for the chirp convolution.

    :param length: the odd vector length M+1
    :returns: the smallest power of two >= 2(M+1) - 1

    >>> _fft_length(5)
    16
    >>> _fft_length(513)
    2048
    """
    return 1 << int(2 * length - 2).bit_length()


class FrftPlan:
    """
    Precomputed chirps for fractional FFTs of a fixed odd length.

    One plan serves many rows at once: `alpha` may be an array, in which
    case row `i` of the input is transformed with fraction `alpha[i]`.
    A plan is immutable once built and may be shared.
    """

    def __init__(self, length: int, alpha: npt.ArrayLike):
        """
        Build the plan.

        :param length: the odd vector length M+1
        :param alpha: the fraction, or one fraction per row
        """
        length = check_int(length, "length", 1)
        if (length % 2) == 0:
            raise ValueError(f"length must be odd, but is {length}.")
        alphas: Final[np.ndarray] = np.asarray(alpha, dtype=float)
        if not np.all(np.isfinite(alphas)):
            raise ValueError("alpha must be finite.")
        #: the odd vector length
        self.length: Final[int] = length
        #: the fractions
        self.alpha: Final[np.ndarray] = alphas
        #: the padded convolution length
        self.fft_length: Final[int] = _fft_length(length)

        half: Final[int] = (length - 1) // 2
        j: Final[np.ndarray] = np.arange(-half, half + 1, dtype=float)
        a: Final[np.ndarray] = \
            alphas[..., np.newaxis] if alphas.ndim > 0 else alphas
        #: the chirp exp(-pi i alpha j^2), applied before and after
        self.__chirp: Final[np.ndarray] = np.exp((-1j * np.pi) * a * (j * j))

        # the kernel b(d) = exp(pi i alpha d^2) for |d| <= M, stored
        # circularly: d >= 0 at the front, d < 0 at the back
        d: Final[np.ndarray] = np.arange(self.fft_length)
        dist: Final[np.ndarray] = np.minimum(d, self.fft_length - d)
        kernel = np.exp((1j * np.pi) * a * (dist * dist).astype(float))
        kernel = np.where(dist <= (length - 1), kernel, 0.0)
        #: the FFT of the kernel
        self.__kernel_hat: Final[np.ndarray] = np.fft.fft(kernel, axis=-1)
        self.__chirp.setflags(write=False)
        self.__kernel_hat.setflags(write=False)

    def apply(self, c: np.ndarray) -> np.ndarray:
        """
        Apply the fractional FFT along the last axis.

        :param c: the input, the last axis has length `self.length`
        :returns: the transformed array
        """
        check_array(c, "c")
        if c.shape[-1] != self.length:
            raise ValueError(f"Last axis must have length {self.length}, "
                             f"but shape is {c.shape}.")
        padded = np.fft.fft(c * self.__chirp, n=self.fft_length, axis=-1)
        conv = np.fft.ifft(padded * self.__kernel_hat, axis=-1)
        return conv[..., :self.length] * self.__chirp

    def apply_adjoint(self, c: np.ndarray) -> np.ndarray:
        """
        Apply the adjoint, i.e., the fractional FFT with negated fractions.

        :param c: the input, the last axis has length `self.length`
        :returns: the transformed array
        """
        return np.conj(self.apply(np.conj(c)))


def frft(c: np.ndarray, alpha: npt.ArrayLike, axis: int = -1) -> np.ndarray:
    """
    Compute the unaliased fractional Fourier transform.

    :param c: the input, odd length along `axis`
    :param alpha: the fraction, a scalar or one value per row
    :param axis: the transformed axis
    :returns: the transform, same shape as `c`
    :raises ValueError: if the transformed axis has even length

    >>> out = frft(np.array([0, 0, 1, 0, 0], dtype=complex), 0.3)
    >>> bool(np.allclose(out, 1.0))
    True
    """
    check_array(c, "c")
    moved: Final[np.ndarray] = np.moveaxis(c, axis, -1)
    result: Final[np.ndarray] = FrftPlan(moved.shape[-1], alpha).apply(moved)
    return np.moveaxis(result, -1, axis)


def frft_adjoint(c: np.ndarray, alpha: npt.ArrayLike,
                 axis: int = -1) -> np.ndarray:
    """
    Compute the adjoint fractional Fourier transform, which is `F^-alpha`.

    :param c: the input, odd length along `axis`
    :param alpha: the fraction, a scalar or one value per row
    :param axis: the transformed axis
    :returns: the transform
    """
    return frft(c, -np.asarray(alpha, dtype=float), axis)


def frft_direct(c: np.ndarray, alpha: float) -> np.ndarray:
    """
    Compute the fractional Fourier transform by its O(M^2) defining sum.

    :param c: the input vector of odd length
    :param alpha: the fraction
    :returns: the transform
    """
    check_array(c, "c")
    if (c.ndim != 1) or ((c.shape[0] % 2) == 0):
        raise ValueError(f"c must be a vector of odd length, but has "
                         f"shape {c.shape}.")
    half: Final[int] = (c.shape[0] - 1) // 2
    j: Final[np.ndarray] = np.arange(-half, half + 1, dtype=float)
    return np.exp((-2j * np.pi * alpha) * np.outer(j, j)) @ c


def pad(c: np.ndarray, m: int, axis: int = -1) -> np.ndarray:
    """
    Zero-pad a vector of even length N symmetrically to odd length m.

    The entry at centered index k in [-N/2, N/2 - 1] keeps its index, all
    other indices in [-(m-1)/2, (m-1)/2] receive zero.

    :param c: the input, even length along `axis`
    :param m: the odd target length, larger than N
    :param axis: the padded axis
    :returns: the padded array

    >>> pad(np.array([1.0, 2.0, 3.0, 4.0]), 9).tolist()
    [0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0]
    """
    check_array(c, "c")
    n: Final[int] = c.shape[axis]
    m = check_int(m, "m", n + 1)
    if ((n % 2) != 0) or ((m % 2) == 0):
        raise ValueError(f"Need even length and odd m, but got length {n} "
                         f"and m={m}.")
    start: Final[int] = (m - 1) // 2 - n // 2
    shape = list(c.shape)
    shape[axis] = m
    result = np.zeros(shape, dtype=c.dtype)
    index = [slice(None)] * c.ndim
    index[axis] = slice(start, start + n)
    result[tuple(index)] = c
    return result


def pad_adjoint(c: np.ndarray, n: int, axis: int = -1) -> np.ndarray:
    """
    Restrict a vector of odd length m to the centered indices [-N/2, N/2-1].

    :param c: the input, odd length along `axis`
    :param n: the even target length
    :param axis: the restricted axis
    :returns: the restricted array (a copy)
    """
    check_array(c, "c")
    m: Final[int] = c.shape[axis]
    n = check_int(n, "n", 0, m - 1)
    if ((n % 2) != 0) or ((m % 2) == 0):
        raise ValueError(f"Need odd length and even n, but got length {m} "
                         f"and n={n}.")
    start: Final[int] = (m - 1) // 2 - n // 2
    index = [slice(None)] * c.ndim
    index[axis] = slice(start, start + n)
    return c[tuple(index)].copy()


def fft1_unaliased(c: np.ndarray, axis: int = -1,
                   norm: str = "backward") -> np.ndarray:
    """
    Compute the centered 1D FFT.

    :param c: the input
    :param axis: the transformed axis
    :param norm: the normalization, as in :func:`numpy.fft.fft`
    :returns: the centered spectrum
    """
    check_array(c, "c")
    return np.fft.fftshift(np.fft.fft(
        np.fft.ifftshift(c, axes=axis), axis=axis, norm=norm), axes=axis)


def fft1_unaliased_adjoint(c: np.ndarray, axis: int = -1) -> np.ndarray:
    """
    Compute the adjoint of the unnormalized centered 1D FFT.

    :param c: the input
    :param axis: the transformed axis
    :returns: the unnormalized centered inverse transform
    """
    check_array(c, "c")
    return np.fft.fftshift(np.fft.ifft(
        np.fft.ifftshift(c, axes=axis), axis=axis, norm="forward"),
        axes=axis)


def fft2_unaliased(x: np.ndarray, norm: str = "backward") -> np.ndarray:
    """
    Compute the centered 2D FFT over the last two axes.

    With the default normalization, the Plancherel identity reads
    `sum |x|^2 = sum |X|^2 / (rows * columns)`.

    :param x: the input
    :param norm: the normalization, as in :func:`numpy.fft.fft2`
    :returns: the centered spectrum
    """
    check_array(x, "x")
    axes: Final[tuple[int, int]] = (-2, -1)
    return np.fft.fftshift(np.fft.fft2(
        np.fft.ifftshift(x, axes=axes), norm=norm), axes=axes)


def ifft2_unaliased(x: np.ndarray, norm: str = "backward") -> np.ndarray:
    """
    Compute the centered 2D inverse FFT over the last two axes.

    :param x: the centered spectrum
    :param norm: the normalization, as in :func:`numpy.fft.ifft2`
    :returns: the inverse transform
    """
    check_array(x, "x")
    axes: Final[tuple[int, int]] = (-2, -1)
    return np.fft.fftshift(np.fft.ifft2(
        np.fft.ifftshift(x, axes=axes), norm=norm), axes=axes)
