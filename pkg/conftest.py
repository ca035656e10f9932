"""The configuration for py.test."""
from typing import Final

# noinspection PyPackageRequirements
import pytest

#: the option that enables the long runs on large images
__SLOW: Final[str] = "--slow"


def pytest_addoption(parser) -> None:
    """Add the option for the long runs."""
    parser.addoption(__SLOW, action="store_true", default=False,
                     help="also run the slow tests on large images")


def pytest_configure(config) -> None:
    """Register the marker of the long runs."""
    config.addinivalue_line("markers", "slow: runs on large images")


def pytest_collection_modifyitems(config, items) -> None:
    """Skip the long runs unless they were requested."""
    if config.getoption(__SLOW):
        return
    skip: Final = pytest.mark.skip(reason=f"needs {__SLOW}")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
