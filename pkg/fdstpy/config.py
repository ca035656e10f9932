"""
The configuration of one command line run.

Values come from the command line flags, then from an optional YAML file,
then from the defaults.
"""
import io
import os
from dataclasses import dataclass, fields
from typing import Any, Final, Iterable, Mapping

import yaml  # type: ignore

from fdstpy.path import Path
from fdstpy.shearlets import DEFAULT_PROFILE, PROFILES
from fdstpy.types import check_float, check_int, type_error
from fdstpy.weights import CHOICES

#: the default image side length
DEFAULT_N: Final[int] = 512
#: the default radial oversampling
DEFAULT_R: Final[int] = 8
#: the environment variable naming the cache directory
CACHE_DIR_VAR: Final[str] = "FDSTPY_CACHE_DIR"
#: the commands
COMMANDS: Final[tuple[str, ...]] = (
    "fdst", "adjoint", "inverse", "weights", "measure", "bench")
#: the measure identifiers
MEASURE_IDS: Final[tuple[str, ...]] = (
    "d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8")


def default_cache_dir() -> str:
    """
    Get the cache directory from the environment.

    :returns: the value of `FDSTPY_CACHE_DIR`, else `~/.cache/fdstpy`
    """
    value: Final[str | None] = os.environ.get(CACHE_DIR_VAR)
    if (value is not None) and (len(value.strip()) > 0):
        return value
    return os.path.join("~", ".cache", "fdstpy")


def _opt_str(value: Any, name: str) -> str | None:
    """
    Check an optional string.

    :param value: the value
    :param name: the name
    :returns: the value
    """
    if (value is not None) and not isinstance(value, str):
        raise type_error(value, name, str)
    return value


@dataclass(frozen=True, init=False)
class RunConfig:
    """The validated settings of a run."""

    #: the command
    command: str
    #: the image side length, `None` to take it from the input
    n: int | None
    #: the radial oversampling, `None` to take it from the input
    r: int | None
    #: the weight basis choice
    choice: int
    #: the window smoothness profile
    profile: str
    #: the CG tolerance
    tol: float
    #: the CG iteration cap
    max_iter: int
    #: is the CG tolerance relative?
    relative_tol: bool
    #: the random seed
    seed: int
    #: the input file
    input: str | None
    #: the output file
    output: str | None
    #: the image generator specification
    gen: str | None
    #: the weight cache directory
    cache_dir: str
    #: the measures to run
    measures: tuple[str, ...]
    #: the image sizes of the benchmark
    sizes: tuple[int, ...]
    #: the repetitions per timing
    repeats: int
    #: the directory for measure CSVs
    out_dir: str
    #: suppress the log?
    quiet: bool

    def __init__(self, command: str, n: int | None = None,
                 r: int | None = None, choice: int = 1,
                 profile: str = DEFAULT_PROFILE, tol: float = 1e-6,
                 max_iter: int = 100, relative_tol: bool = False,
                 seed: int = 0, input: str | None = None,  # noqa: A002
                 output: str | None = None, gen: str | None = None,
                 cache_dir: str | None = None,
                 measures: Iterable[str] = (),
                 sizes: Iterable[int] = (32, 64, 128, 256, 512),
                 repeats: int = 3, out_dir: str = ".",
                 quiet: bool = False):
        """
        Create and validate the configuration.

        :param command: the command
        :param n: the image side length
        :param r: the radial oversampling
        :param choice: the weight basis choice
        :param profile: the window profile
        :param tol: the CG tolerance
        :param max_iter: the CG iteration cap
        :param relative_tol: is the tolerance relative?
        :param seed: the random seed
        :param input: the input file
        :param output: the output file
        :param gen: the image generator specification
        :param cache_dir: the cache directory, `None` for the default
        :param measures: the measure ids, `all` selects every measure
        :param sizes: the benchmark sizes
        :param repeats: the benchmark repetitions
        :param out_dir: the CSV directory
        :param quiet: suppress the log?
        """
        if command not in COMMANDS:
            raise ValueError(f"Unknown command '{command}'.")
        ms: list[str] = []
        for m in measures:
            if m == "all":
                ms.extend(MEASURE_IDS)
            elif m in MEASURE_IDS:
                ms.append(m)
            else:
                raise ValueError(f"Unknown measure '{m}'.")
        if profile not in PROFILES:
            raise ValueError(f"Unknown window profile '{profile}'.")
        choice = check_int(choice, "choice")
        if choice not in CHOICES:
            raise ValueError(f"choice must be one of {CHOICES}, "
                             f"but is {choice}.")
        object.__setattr__(self, "command", command)
        object.__setattr__(self, "n", None if n is None
                           else check_int(n, "n", 4))
        object.__setattr__(self, "r", None if r is None
                           else check_int(r, "r", 2))
        object.__setattr__(self, "choice", choice)
        object.__setattr__(self, "profile", profile)
        object.__setattr__(self, "tol", check_float(tol, "tol", 0.0, True))
        object.__setattr__(self, "max_iter", check_int(
            max_iter, "max_iter", 0))
        object.__setattr__(self, "relative_tol", bool(relative_tol))
        object.__setattr__(self, "seed", check_int(seed, "seed", 0))
        object.__setattr__(self, "input", _opt_str(input, "input"))
        object.__setattr__(self, "output", _opt_str(output, "output"))
        object.__setattr__(self, "gen", _opt_str(gen, "gen"))
        object.__setattr__(self, "cache_dir", default_cache_dir()
                           if cache_dir is None
                           else _opt_str(cache_dir, "cache_dir"))
        object.__setattr__(self, "measures", tuple(dict.fromkeys(ms)))
        object.__setattr__(self, "sizes", tuple(
            check_int(s, "size", 4) for s in sizes))
        object.__setattr__(self, "repeats", check_int(repeats, "repeats", 1))
        object.__setattr__(self, "out_dir", _opt_str(out_dir, "out_dir"))
        object.__setattr__(self, "quiet", bool(quiet))


#: the names of all configuration fields
CONFIG_KEYS: Final[frozenset[str]] = frozenset(
    f.name for f in fields(RunConfig))


def load_config_file(path: str) -> dict[str, Any]:
    """
    Load configuration values from a YAML file.

    :param path: the path to the file
    :returns: the mapping of field names to values
    :raises ValueError: if the file is not a mapping of known fields
    """
    text: Final[str] = Path(path).read_bytes().decode("utf-8")
    with io.StringIO(text) as stream:
        try:
            res = yaml.safe_load(stream)
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid configuration file '{path}'.") from e
    if res is None:
        return {}
    if not isinstance(res, dict):
        raise type_error(res, "configuration", dict)
    unknown: Final[set[str]] = set(map(str, res)) - CONFIG_KEYS
    if unknown:
        raise ValueError(f"Unknown configuration keys {sorted(unknown)} "
                         f"in '{path}'.")
    if "command" in res:
        raise ValueError("The command cannot be set in a configuration "
                         "file.")
    return dict(res)


def make_config(command: str, flags: Mapping[str, Any],
                config_file: str | None = None) -> RunConfig:
    """
    Merge command line flags, a configuration file and the defaults.

    Flags with value `None` count as not given.

    :param command: the command
    :param flags: the command line flags
    :param config_file: the YAML file, or `None`
    :returns: the configuration
    """
    values: Final[dict[str, Any]] = {} if config_file is None \
        else load_config_file(config_file)
    values.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig(command, **values)
