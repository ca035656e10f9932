"""The `logger` routine for writing diagnostic lines to stderr."""
import datetime
import sys
import time
from contextlib import contextmanager
from typing import Callable, Final, Iterator

#: the "now" function
__DTN: Final[Callable[[], datetime.datetime]] = datetime.datetime.now

#: the switch for silencing the log, a one-element list so it can be mutated
__QUIET: Final[list[bool]] = [False]


def set_quiet(quiet: bool) -> None:
    """
    Switch the log on or off.

    :param quiet: `True` to suppress all log output
    """
    __QUIET[0] = bool(quiet)


def logger(message: str) -> None:
    """
    Write a message to the log.

    Results go to stdout, so the log uses stderr.

    :param message: the message
    """
    if not __QUIET[0]:
        print(f"{__DTN()}: {message}", file=sys.stderr, flush=True)  # noqa


@contextmanager
def log_duration(what: str) -> Iterator[None]:
    """
    Log how long the body of a `with` block took.

    :param what: the name of the activity
    """
    start: Final[float] = time.perf_counter()
    try:
        yield
    finally:
        logger(f"{what} took {time.perf_counter() - start:.3f}s.")
