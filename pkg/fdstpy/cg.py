"""Conjugate gradients for Hermitian positive definite image operators."""
from dataclasses import dataclass
from typing import Callable, Final

import numpy as np

from fdstpy.logger import logger
from fdstpy.types import check_array, check_float, check_int, type_error


@dataclass(frozen=True, init=False, eq=False)
class CGResult:
    """The outcome of a conjugate gradient run."""

    #: the final iterate
    x: np.ndarray
    #: did the residual drop below the tolerance?
    converged: bool
    #: the number of iterations performed
    iterations: int
    #: the norm of the final residual
    residual: float
    #: the residual norms, starting with the initial one
    history: tuple[float, ...]

    def __init__(self, x: np.ndarray, converged: bool, iterations: int,
                 residual: float, history: tuple[float, ...]):
        """
        Create the result record.

        :param x: the final iterate
        :param converged: the convergence flag
        :param iterations: the number of iterations
        :param residual: the final residual norm
        :param history: the residual norms
        """
        object.__setattr__(self, "x", check_array(x, "x"))
        object.__setattr__(self, "converged", bool(converged))
        object.__setattr__(self, "iterations", check_int(
            iterations, "iterations", 0))
        object.__setattr__(self, "residual", float(residual))
        object.__setattr__(self, "history", tuple(map(float, history)))


def _dot(a: np.ndarray, b: np.ndarray) -> complex:
    """
    Compute the inner product `sum conj(a) * b`.

    :param a: the first array
    :param b: the second array
    :returns: the inner product
    """
    return complex(np.vdot(a, b))


def conjugate_gradient(apply_a: Callable[[np.ndarray], np.ndarray],
                       b: np.ndarray, x0: np.ndarray | None = None,
                       tol: float = 1e-6, max_iter: int = 100,
                       relative: bool = False) -> CGResult:
    """
    Solve `A x = b` for a Hermitian positive definite operator `A`.

    Iteration stops once `||r_k|| <= tol` (or `tol * ||b||` in relative
    mode) or after `max_iter` steps. Non-convergence is reported through
    the result, not raised.

    :param apply_a: the operator
    :param b: the right-hand side
    :param x0: the initial guess, zero by default
    :param tol: the residual tolerance
    :param max_iter: the iteration cap
    :param relative: measure the residual relative to `||b||`?
    :returns: the result

    >>> a = np.diag([1.0, 2.0, 4.0])
    >>> res = conjugate_gradient(lambda v: a @ v, np.ones(3), tol=1e-12)
    >>> res.converged, res.iterations, np.allclose(res.x, [1, 0.5, 0.25])
    (True, 3, True)
    """
    if not callable(apply_a):
        raise type_error(apply_a, "apply_a", call=True)
    check_array(b, "b")
    tol = check_float(tol, "tol", 0.0, strict=True)
    max_iter = check_int(max_iter, "max_iter", 0)
    x = np.zeros_like(b, dtype=complex) if x0 is None \
        else check_array(x0, "x0", b.shape).astype(complex)
    threshold: Final[float] = tol * float(np.linalg.norm(b)) if relative \
        else tol
    r = b - apply_a(x) if x0 is not None else b.astype(complex)
    rr: float = _dot(r, r).real
    history: Final[list[float]] = [float(np.sqrt(rr))]
    p = r.copy()
    iteration: int = 0
    while (history[-1] > threshold) and (iteration < max_iter):
        ap = apply_a(p)
        pap: Final[float] = _dot(p, ap).real
        if pap <= 0.0:
            logger(f"cg stopped: search direction has curvature {pap:.3e}.")
            break
        alpha = rr / pap
        x = x + alpha * p
        r = r - alpha * ap
        rr_next = _dot(r, r).real
        p = r + (rr_next / rr) * p
        rr = rr_next
        iteration += 1
        history.append(float(np.sqrt(rr)))
    converged: Final[bool] = history[-1] <= threshold
    logger(f"cg stopped after {iteration} iterations with residual "
           f"{history[-1]:.3e}{'' if converged else ' (not converged)'}.")
    return CGResult(x, converged, iteration, history[-1], tuple(history))
