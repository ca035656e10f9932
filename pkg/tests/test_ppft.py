"""Test the pseudo-polar Fourier transform."""
import numpy as np

# noinspection PyPackageRequirements
import pytest

from fdstpy.grid import GridParams
from fdstpy.ppft import (
    PPImage,
    adjoint_ppft,
    ppft,
    ppft_direct,
    ppft_matrix,
)


def _complex(gen: np.random.Generator, *shape: int) -> np.ndarray:
    """Draw a complex Gaussian array."""
    return gen.standard_normal(shape) + 1j * gen.standard_normal(shape)


def test_ppft_against_direct_sum() -> None:
    """Test the fast transform against the defining sum."""
    gen = np.random.default_rng(11)
    for n in (4, 8, 16):
        for r in (2, 4, 8):
            p = GridParams(n, r)
            for _ in range(5):
                image = _complex(gen, n, n)
                fast = ppft(p, image).data
                direct = ppft_direct(p, image).data
                assert np.linalg.norm(fast - direct) \
                    <= 1e-10 * np.linalg.norm(direct)


def test_ppft_horizontal_line() -> None:
    """Test the transform of the line v = 0 at the center and off axis."""
    p = GridParams(16, 8)
    image = np.zeros((16, 16))
    image[:, 8] = 1.0
    data = ppft(p, image).data
    assert np.allclose(data[:, p.k_max, :], 16.0)
    k = np.arange(-p.k_max, p.k_max + 1)
    off = k != 0
    bound = p.radial_size / (2.0 * np.abs(k[off]))
    assert np.all(np.abs(data[1][off]) <= bound[:, np.newaxis] + 1e-9)


def test_adjoint_against_matrix() -> None:
    """Test the adjoint against the conjugate transpose of the matrix."""
    p = GridParams(4, 2)
    gen = np.random.default_rng(12)
    y = _complex(gen, *p.shape)
    expected = ppft_matrix(p).conj().T @ y.reshape(-1)
    result = adjoint_ppft(PPImage(p, y))
    assert np.linalg.norm(result.reshape(-1) - expected) \
        <= 1e-10 * np.linalg.norm(expected)


def test_adjoint_identity() -> None:
    """Test <P x, y> = <x, P* y>."""
    p = GridParams(32, 8)
    gen = np.random.default_rng(13)
    x = _complex(gen, 32, 32)
    y = _complex(gen, *p.shape)
    lhs = np.vdot(y, ppft(p, x).data)
    rhs = np.vdot(adjoint_ppft(PPImage(p, y)), x)
    assert abs(lhs - rhs) <= 1e-11 * np.linalg.norm(x) * np.linalg.norm(y)


def test_ppft_invalid() -> None:
    """Test that images and grid data of the wrong shape are rejected."""
    p = GridParams(8, 2)
    with pytest.raises(ValueError):
        ppft(p, np.zeros((8, 4)))
    with pytest.raises(ValueError):
        PPImage(p, np.zeros((2, 9, 9)))
    with pytest.raises(TypeError):
        adjoint_ppft(np.zeros(p.shape))  # type: ignore
    assert PPImage(p, np.ones(p.shape)).norm() == pytest.approx(
        np.sqrt(2 * 17 * 9))
