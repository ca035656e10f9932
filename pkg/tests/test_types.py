"""Test the type and value checks."""
from typing import cast

import numpy as np

# noinspection PyPackageRequirements
import pytest

from fdstpy.types import check_array, check_float, check_int, type_error


def test_type_error() -> None:
    """Test the messages of type errors."""
    assert str(type_error(1.5, "n", int)) == \
        "n should be an instance of int but is float, namely '1.5'."
    assert str(type_error(None, "x", (int, float))) == \
        "x should be an instance of any in {float, int} but is None."
    assert str(type_error(3, "fn", call=True)) == \
        "fn should be a callable but is int, namely '3'."


def test_check_int() -> None:
    """Test the integer checks."""
    assert check_int(5, "n") == 5
    assert check_int(np.int32(7), "n", 0, 10) == 7
    assert isinstance(check_int(np.int64(2), "n"), int)
    with pytest.raises(TypeError):
        check_int(cast(int, 2.0), "n")
    with pytest.raises(TypeError):
        check_int(cast(int, False), "n")
    with pytest.raises(ValueError):
        check_int(3, "n", 4)
    with pytest.raises(ValueError):
        check_int(11, "n", 0, 10)


def test_check_float() -> None:
    """Test the real number checks."""
    assert check_float(2, "x") == 2.0
    assert check_float(0.0, "x", 0.0) == 0.0
    with pytest.raises(ValueError):
        check_float(0.0, "x", 0.0, strict=True)
    with pytest.raises(ValueError):
        check_float(float("nan"), "x")
    with pytest.raises(ValueError):
        check_float(float("inf"), "x")
    with pytest.raises(TypeError):
        check_float(cast(float, "1"), "x")


def test_check_array() -> None:
    """Test the array checks."""
    a = np.zeros((2, 3), complex)
    assert check_array(a, "a", (2, 3)) is a
    with pytest.raises(ValueError):
        check_array(a, "a", (3, 2))
    with pytest.raises(ValueError):
        check_array(np.array(["x"]), "a")
    with pytest.raises(TypeError):
        check_array(cast(np.ndarray, [1.0, 2.0]), "a")
