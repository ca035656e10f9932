"""Type and value checking routines shared by all modules."""
from typing import Any, Final, Iterable

import numpy as np


def type_name(tpe: type) -> str:
    """
    Get the qualified name of a type, without `builtins`.

    :param tpe: the type
    :returns: the name

    >>> type_name(int), type_name(type(None))
    ('int', 'None')
    >>> from fdstpy.grid import GridParams
    >>> type_name(GridParams)
    'fdstpy.grid.GridParams'
    """
    if tpe is type(None):
        return "None"
    qualname: Final[str] = getattr(tpe, "__qualname__", str(tpe))
    module: Final[str | None] = getattr(tpe, "__module__", None)
    return qualname if module in (None, "builtins") \
        else f"{module}.{qualname}"


def type_name_of(obj: Any) -> str:
    """
    Get the qualified type name of an object.

    :param obj: the object
    :returns: the name of its type

    >>> type_name_of(1.5), type_name_of(None)
    ('float', 'None')
    >>> type_name_of(np.zeros(2))
    'numpy.ndarray'
    """
    return type_name(type(obj))


def type_error(obj: Any, name: str,
               expected: None | type | Iterable[type] = None,
               call: bool = False) -> TypeError:
    """
    Build the error for an argument of the wrong type.

    :param obj: the argument
    :param name: the name of the argument
    :param expected: the accepted type or types, if any
    :param call: would a callable have been accepted?
    :returns: the error, to be raised by the caller

    >>> type_error(1.3, "n", int)
    TypeError("n should be an instance of int but is float, namely '1.3'.")
    >>> type_error("x", "tol", (int, float)).args[0]
    "tol should be an instance of any in {float, int} but is str, namely 'x'."
    >>> type_error("f", "apply_a", call=True).args[0]
    "apply_a should be a callable but is str, namely 'f'."
    >>> type_error(None, "image", np.ndarray)
    TypeError('image should be an instance of numpy.ndarray but is None.')
    """
    wanted: list[str] = []
    if isinstance(expected, Iterable):
        names: Final[str] = ", ".join(sorted(map(type_name, expected)))
        wanted.append(f"an instance of any in {{{names}}}")
    elif expected is not None:
        wanted.append(f"an instance of {type_name(expected)}")
    if call:
        wanted.append("a callable")
    actual: Final[str] = "None" if obj is None \
        else f"{type_name_of(obj)}, namely '{obj}'"
    return TypeError(f"{name} should be {' or '.join(wanted)} but is "
                     f"{actual}.")


def check_int(value: Any, name: str,
              minimum: int | None = None,
              maximum: int | None = None) -> int:
    """
    Check that a value is an integer within an optional range.

    :param value: the value
    :param name: the name used in error messages
    :param minimum: the smallest permitted value, or `None`
    :param maximum: the largest permitted value, or `None`
    :returns: the value as `int`
    :raises TypeError: if `value` is not an integer
    :raises ValueError: if `value` is out of range

    >>> check_int(4, "n", 4)
    4
    >>> check_int(np.int64(3), "j")
    3
    >>> check_int(2, "n", 4)
    Traceback (most recent call last):
    ...
    ValueError: n must be >= 4, but is 2.
    >>> check_int(True, "n")
    Traceback (most recent call last):
    ...
    TypeError: n should be an instance of int but is bool, namely 'True'.
    """
    if isinstance(value, bool) or not isinstance(value, int | np.integer):
        raise type_error(value, name, int)
    result: Final[int] = int(value)
    if (minimum is not None) and (result < minimum):
        raise ValueError(f"{name} must be >= {minimum}, but is {result}.")
    if (maximum is not None) and (result > maximum):
        raise ValueError(f"{name} must be <= {maximum}, but is {result}.")
    return result


def check_float(value: Any, name: str,
                minimum: float | None = None,
                strict: bool = False) -> float:
    """
    Check that a value is a finite real number.

    :param value: the value
    :param name: the name used in error messages
    :param minimum: the lower bound, or `None`
    :param strict: is the lower bound exclusive?
    :returns: the value as `float`

    >>> check_float(1e-6, "tol", 0.0, strict=True)
    1e-06
    >>> check_float(0, "tol", 0.0, strict=True)
    Traceback (most recent call last):
    ...
    ValueError: tol must be > 0.0, but is 0.0.
    """
    if isinstance(value, bool) \
            or not isinstance(value, int | float | np.integer | np.floating):
        raise type_error(value, name, float)
    result: Final[float] = float(value)
    if not np.isfinite(result):
        raise ValueError(f"{name} must be finite, but is {result}.")
    if minimum is not None:
        if strict and (result <= minimum):
            raise ValueError(f"{name} must be > {minimum}, but is {result}.")
        if (not strict) and (result < minimum):
            raise ValueError(f"{name} must be >= {minimum}, but is {result}.")
    return result


def check_array(value: Any, name: str,
                shape: tuple[int, ...] | None = None) -> np.ndarray:
    """
    Check that a value is a numerical numpy array of a given shape.

    :param value: the value
    :param name: the name used in error messages
    :param shape: the required shape, or `None` to accept any
    :returns: the array itself

    >>> check_array(np.zeros((2, 3)), "x", (2, 3)).shape
    (2, 3)
    >>> check_array(np.zeros(3), "x", (2, 3))
    Traceback (most recent call last):
    ...
    ValueError: x must have shape (2, 3), but has shape (3,).
    """
    if not isinstance(value, np.ndarray):
        raise type_error(value, name, np.ndarray)
    if value.dtype.kind not in "biufc":
        raise ValueError(f"{name} must be numerical, but has "
                         f"dtype {value.dtype}.")
    if (shape is not None) and (value.shape != tuple(shape)):
        raise ValueError(f"{name} must have shape {tuple(shape)}, but has "
                         f"shape {value.shape}.")
    return value
