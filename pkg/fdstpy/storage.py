"""
Binary containers for shearlet coefficients and fitted weights.

Both formats start with one ASCII header line followed by little-endian
binary payload.

Coefficient container:

    dsh1 N R nblocks\\n
    nblocks x ( <5i (iota, j, s, L1, L2) then L1*L2 <c16 values )

Weight cache:

    ppwt1 N R choice n\\n
    n <f8 coefficients, then the 2 x (RN+1) x (N+1) <f8 indexed weights
"""
import hashlib
import struct
from typing import Final

import numpy as np
import regex as reg  # type: ignore

from fdstpy.grid import GridParams
from fdstpy.logger import logger
from fdstpy.path import Path
from fdstpy.shearlets import ShearletCoefficients, SubbandIndex, \
    scale_shear_table
from fdstpy.types import type_error
from fdstpy.weights import WeightMap

#: the version of the weight cache layout and fit, part of the cache key
WEIGHT_FORMAT_VERSION: Final[int] = 2

#: the header of the coefficient container
__COEFF_HEADER: Final = reg.compile(
    r"dsh1 (?P<n>\d+) (?P<r>\d+) (?P<blocks>\d+)")
#: the header of the weight cache
__WEIGHT_HEADER: Final = reg.compile(
    r"ppwt1 (?P<n>\d+) (?P<r>\d+) (?P<choice>-?\d+) (?P<count>\d+)")
#: the block record header
__BLOCK: Final[struct.Struct] = struct.Struct("<5i")


class FormatError(ValueError):
    """A file does not follow its binary format."""


def split_header(data: bytes, what: str) -> tuple[str, memoryview]:
    """
    Split a file into its header line and the binary payload.

    :param data: the file contents
    :param what: the kind of file, for error messages
    :returns: the decoded header without newline, and the payload
    :raises FormatError: if there is no header line
    """
    end: Final[int] = data.find(b"\n", 0, 256)
    if end < 0:
        raise FormatError(f"No header line found in {what}.")
    try:
        header: Final[str] = data[:end].decode("ascii")
    except UnicodeDecodeError as err:
        raise FormatError(f"Header of {what} is not ASCII.") from err
    return header, memoryview(data)[end + 1:]


def __take(payload: memoryview, start: int, size: int, what: str) -> int:
    """
    Check that `size` bytes are available at `start`.

    :param payload: the payload
    :param start: the offset
    :param size: the number of bytes needed
    :param what: the kind of file
    :returns: the end offset
    """
    end: Final[int] = start + size
    if end > len(payload):
        raise FormatError(f"{what} is truncated: need {end} payload bytes, "
                          f"but only {len(payload)} exist.")
    return end


def encode_coefficients(c: ShearletCoefficients) -> bytes:
    """
    Serialize shearlet coefficients.

    :param c: the coefficients
    :returns: the container bytes
    """
    if not isinstance(c, ShearletCoefficients):
        raise type_error(c, "c", ShearletCoefficients)
    parts: Final[list[bytes]] = [
        f"dsh1 {c.params.n} {c.params.r} {len(c.blocks)}\n".encode("ascii")]
    for index, block in c.blocks.items():
        parts.append(__BLOCK.pack(index.iota, index.j, index.s,
                                  block.shape[0], block.shape[1]))
        parts.append(np.ascontiguousarray(block, dtype="<c16").tobytes())
    return b"".join(parts)


def decode_coefficients(data: bytes,
                        expected: GridParams | None = None) \
        -> ShearletCoefficients:
    """
    Parse a coefficient container.

    :param data: the container bytes
    :param expected: the grid the container must belong to, or `None`
    :returns: the coefficients
    :raises FormatError: if the bytes are malformed or do not fit
    """
    header, payload = split_header(data, "coefficient container")
    match = __COEFF_HEADER.fullmatch(header)
    if match is None:
        raise FormatError(f"Invalid coefficient header '{header}'.")
    try:
        params: Final[GridParams] = GridParams(int(match["n"]),
                                               int(match["r"]))
    except ValueError as err:
        raise FormatError(f"Invalid grid in header '{header}'.") from err
    if (expected is not None) and (expected != params):
        raise FormatError(f"Container holds {params}, expected {expected}.")
    table: Final = scale_shear_table(params)
    if int(match["blocks"]) != len(table):
        raise FormatError(f"{params} has {len(table)} subbands, but the "
                          f"header announces {match['blocks']}.")
    blocks: Final[dict[SubbandIndex, np.ndarray]] = {}
    offset: int = 0
    for geometry in table:
        end = __take(payload, offset, __BLOCK.size, "coefficient container")
        iota, j, s, l1, l2 = __BLOCK.unpack(payload[offset:end])
        g = geometry.index
        if ((iota, j, s) != (g.iota, g.j, g.s)) \
                or ((l1, l2) != geometry.shape):
            raise FormatError(
                f"Block ({iota}, {j}, {s}) of shape ({l1}, {l2}) does not "
                f"match expected {geometry.index} of shape {geometry.shape}.")
        offset = end
        end = __take(payload, offset, 16 * l1 * l2, "coefficient container")
        blocks[geometry.index] = np.frombuffer(
            payload[offset:end], dtype="<c16").astype(complex).reshape(
            l1, l2)
        offset = end
    if offset != len(payload):
        raise FormatError(f"{len(payload) - offset} trailing bytes in "
                          "coefficient container.")
    return ShearletCoefficients(params, blocks)


def write_coefficients(path: str, c: ShearletCoefficients) -> Path:
    """
    Write shearlet coefficients to a file.

    :param path: the destination
    :param c: the coefficients
    :returns: the canonical path
    """
    dest: Final[Path] = Path(path)
    dest.write_bytes_atomic(encode_coefficients(c))
    logger(f"wrote {len(c.blocks)} coefficient blocks to '{dest}'.")
    return dest


def read_coefficients(path: str, expected: GridParams | None = None) \
        -> ShearletCoefficients:
    """
    Read shearlet coefficients from a file.

    :param path: the source
    :param expected: the grid the file must belong to, or `None`
    :returns: the coefficients
    """
    return decode_coefficients(Path(path).read_bytes(), expected)


def weight_cache_key(params: GridParams, choice: int) -> str:
    """
    Get the cache key of fitted weights.

    :param params: the grid parameters
    :param choice: the basis choice
    :returns: a 16-character hexadecimal key
    """
    text: Final[str] = (f"{params.n}|{params.r}|{params.m0}|{choice}|"
                        f"{WEIGHT_FORMAT_VERSION}")
    return hashlib.sha256(text.encode("ascii")).hexdigest()[:16]


def weight_cache_path(cache_dir: str, params: GridParams,
                      choice: int) -> Path:
    """
    Get the path of the cached weights of a grid and basis choice.

    :param cache_dir: the cache directory
    :param params: the grid parameters
    :param choice: the basis choice
    :returns: the file path inside the cache directory
    """
    return Path(cache_dir).resolve_inside(
        f"weights-{weight_cache_key(params, choice)}.ppwt")


def encode_weights(w: WeightMap) -> bytes:
    """
    Serialize fitted weights.

    :param w: the weights, which must carry their basis choice
    :returns: the bytes
    """
    if w.choice is None:
        raise ValueError("Only weights of a basis choice can be stored.")
    p: Final[GridParams] = w.params
    return b"".join((
        f"ppwt1 {p.n} {p.r} {w.choice} {len(w.coeffs)}\n".encode("ascii"),
        np.asarray(w.coeffs, dtype="<f8").tobytes(),
        np.ascontiguousarray(w.values, dtype="<f8").tobytes()))


def decode_weights(data: bytes, params: GridParams, choice: int) -> WeightMap:
    """
    Parse cached weights.

    :param data: the bytes
    :param params: the expected grid parameters
    :param choice: the expected basis choice
    :returns: the weights
    :raises FormatError: if the bytes are malformed or do not fit
    """
    header, payload = split_header(data, "weight cache")
    match = __WEIGHT_HEADER.fullmatch(header)
    if match is None:
        raise FormatError(f"Invalid weight cache header '{header}'.")
    if (int(match["n"]), int(match["r"]), int(match["choice"])) \
            != (params.n, params.r, choice):
        raise FormatError(f"Weight cache header '{header}' does not match "
                          f"{params} with choice {choice}.")
    count: Final[int] = int(match["count"])
    size: Final[int] = 2 * params.radial_size * params.angular_size
    if len(payload) != 8 * (count + size):
        raise FormatError(f"Weight cache has {len(payload)} payload bytes, "
                          f"expected {8 * (count + size)}.")
    values: Final[np.ndarray] = np.frombuffer(
        payload, dtype="<f8").astype(float)
    try:
        return WeightMap(params, values[count:].reshape(params.shape),
                         values[:count], choice)
    except ValueError as err:
        raise FormatError("Weight cache holds invalid weights.") from err


def load_cached_weights(cache_dir: str, params: GridParams,
                        choice: int) -> WeightMap | None:
    """
    Load weights from the cache.

    A missing or unreadable file counts as a miss.

    :param cache_dir: the cache directory
    :param params: the grid parameters
    :param choice: the basis choice
    :returns: the weights, or `None` on a miss
    """
    path: Final[Path] = weight_cache_path(cache_dir, params, choice)
    try:
        data: Final[bytes] = path.read_bytes()
    except ValueError:
        return None
    try:
        result: Final[WeightMap] = decode_weights(data, params, choice)
    except FormatError as err:
        logger(f"ignoring broken weight cache '{path}': {err}")
        return None
    logger(f"weight cache hit '{path}'.")
    return result


def store_cached_weights(cache_dir: str, w: WeightMap) -> Path:
    """
    Store weights in the cache, atomically.

    :param cache_dir: the cache directory
    :param w: the weights
    :returns: the path of the cache file
    """
    if w.choice is None:
        raise ValueError("Only weights of a basis choice can be cached.")
    Path(cache_dir).ensure_dir_exists()
    path: Final[Path] = weight_cache_path(cache_dir, w.params, w.choice)
    path.write_bytes_atomic(encode_weights(w))
    logger(f"stored weights in '{path}'.")
    return path
