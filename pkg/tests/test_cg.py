"""Test the conjugate gradient solver."""
import numpy as np

# noinspection PyPackageRequirements
import pytest

from fdstpy.cg import conjugate_gradient


def test_hermitian_system() -> None:
    """Test a random Hermitian positive definite system."""
    gen = np.random.default_rng(41)
    b_mat = gen.standard_normal((12, 12)) + 1j * gen.standard_normal((12, 12))
    a = b_mat.conj().T @ b_mat + 12.0 * np.eye(12)
    rhs = gen.standard_normal(12) + 1j * gen.standard_normal(12)
    res = conjugate_gradient(lambda v: a @ v, rhs, tol=1e-12)
    assert res.converged
    assert np.allclose(res.x, np.linalg.solve(a, rhs))
    assert len(res.history) == res.iterations + 1
    assert res.residual == res.history[-1]
    assert res.residual <= 1e-12
    assert res.history[-1] < min(res.history[:-1])


def test_image_operator() -> None:
    """Test an operator on 2D arrays with an initial guess."""
    weights = np.linspace(1.0, 3.0, 16).reshape(4, 4)
    target = np.arange(16.0).reshape(4, 4)
    rhs = weights * target
    res = conjugate_gradient(lambda v: weights * v, rhs,
                             x0=np.ones((4, 4)), tol=1e-10)
    assert res.converged
    assert res.x.shape == (4, 4)
    assert np.allclose(res.x, target)


def test_relative_tolerance_and_cap() -> None:
    """Test the relative tolerance and the iteration cap."""
    a = np.diag(np.arange(1.0, 31.0))
    rhs = np.full(30, 100.0)
    loose = conjugate_gradient(lambda v: a @ v, rhs, tol=1e-3,
                               relative=True)
    assert loose.converged
    assert loose.residual <= 1e-3 * np.linalg.norm(rhs)
    assert loose.residual > 1e-3

    capped = conjugate_gradient(lambda v: a @ v, rhs, tol=1e-14,
                                max_iter=2)
    assert not capped.converged
    assert capped.iterations == 2

    none = conjugate_gradient(lambda v: a @ v, rhs, max_iter=0)
    assert not none.converged
    assert none.iterations == 0
    assert np.all(none.x == 0)

    zero = conjugate_gradient(lambda v: a @ v, np.zeros(30), max_iter=0)
    assert zero.converged


def test_indefinite_operator() -> None:
    """Test that a direction of non-positive curvature stops the solver."""
    res = conjugate_gradient(lambda v: -v, np.ones(3))
    assert not res.converged
    assert res.iterations == 0


def test_invalid_arguments() -> None:
    """Test that invalid settings are rejected."""
    with pytest.raises(ValueError):
        conjugate_gradient(lambda v: v, np.ones(3), tol=0.0)
    with pytest.raises(ValueError):
        conjugate_gradient(lambda v: v, np.ones(3), max_iter=-1)
    with pytest.raises(ValueError):
        conjugate_gradient(lambda v: v, np.ones(3), x0=np.ones(4))
    with pytest.raises(TypeError):
        conjugate_gradient(np.eye(3), np.ones(3))  # type: ignore
