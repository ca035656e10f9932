"""
Test images and image files.

Images are N x N arrays indexed `[u + N/2, v + N/2]`. Two file formats are
supported, chosen by suffix:

- `.pgm`: binary portable graymap (P5), 8 or 16 bit, values mapped to
  [0, 1] by division by the maximum gray value;
- anything else: the raw format, one ASCII header line
  `img1 N complex{0|1}` followed by little-endian float64 values in row
  major order (real/imaginary pairs for complex images).
"""
from typing import Callable, Final

import numpy as np
import regex as reg  # type: ignore

from fdstpy.grid import CONE_11, CONE_12
from fdstpy.logger import logger
from fdstpy.path import Path
from fdstpy.shearlets import ShearletCoefficients, SubbandIndex
from fdstpy.storage import FormatError, split_header
from fdstpy.transform import TransformPlan, adjoint_fdst
from fdstpy.types import check_array, check_int, type_error

#: the generator specification `name[:key=value[,key=value]]`
__GEN_SPEC: Final = reg.compile(
    r"(?P<name>[a-z]+)(?::(?P<args>[a-z]+=[^,=]+(?:,[a-z]+=[^,=]+)*))?")
#: the raw image header
__RAW_HEADER: Final = reg.compile(r"img1 (?P<n>\d+) complex(?P<c>[01])")
#: one header token of a graymap: a comment or a word
__PGM_TOKEN: Final = reg.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def coordinates(n: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Get the centered pixel coordinates of an image.

    :param n: the side length
    :returns: the arrays u and v of shape (n, n)
    """
    n = check_int(n, "n", 1)
    c: Final[np.ndarray] = np.arange(-(n // 2), n - (n // 2), dtype=float)
    return np.meshgrid(c, c, indexing="ij")


def delta_image(n: int) -> np.ndarray:
    """
    Get the image that is one at the origin and zero elsewhere.

    :param n: the side length
    :returns: the image
    """
    result: Final[np.ndarray] = np.zeros((n, n))
    result[n // 2, n // 2] = 1.0
    return result


def random_image(n: int, seed: int) -> np.ndarray:
    """
    Draw a real standard-normal image.

    :param n: the side length
    :param seed: the seed of the PCG64 generator
    :returns: the image
    """
    return np.random.Generator(np.random.PCG64(
        check_int(seed, "seed", 0))).standard_normal((n, n))


def gaussian_image(n: int, var: float = 256.0) -> np.ndarray:
    """
    Get the centered Gaussian `exp(-(u^2 + v^2) / (2 var))`.

    :param n: the side length
    :param var: the variance
    :returns: the image
    """
    if var <= 0:
        raise ValueError(f"var must be positive, but is {var}.")
    u, v = coordinates(n)
    return np.exp(-(u * u + v * v) / (2.0 * var))


def line_image(n: int, t: float = 0.0, transpose: bool = False) \
        -> np.ndarray:
    """
    Get the line `v = round(t u)` through the origin.

    :param n: the side length
    :param t: the slope
    :param transpose: swap the roles of u and v?
    :returns: the image
    """
    u, v = coordinates(n)
    result: Final[np.ndarray] = (v == np.round(t * u)).astype(float)
    return result.T.copy() if transpose else result


def edge_image(n: int, t: float = 0.0, transpose: bool = False) \
        -> np.ndarray:
    """
    Get the edge `H(v - t u)` through the origin, with `H(0) = 1/2`.

    :param n: the side length
    :param t: the slope
    :param transpose: get `H(u - t v)` instead?
    :returns: the image
    """
    u, v = coordinates(n)
    result: Final[np.ndarray] = np.heaviside(v - t * u, 0.5)
    return result.T.copy() if transpose else result


def tapered_edge_image(n: int, t: float = 0.0,
                       radius: float | None = None) -> np.ndarray:
    """
    Get the edge `H(u - t v)` faded out smoothly around the origin.

    The image samples `f(u - t v, v)` with `f(x, y) = H(x) g(x, y)`, where
    the window `g = cos^2(pi r / (2 radius))` of the distance r to the origin
    vanishes for `r >= radius`. Images with different t are therefore exact
    shears of one compactly supported function, and none of them touches
    the image border.

    :param n: the side length
    :param t: the shear
    :param radius: the window radius, `0.4 n` by default
    :returns: the image
    :raises ValueError: if the sheared window leaves the image
    """
    rho: Final[float] = 0.4 * n if radius is None else float(radius)
    if not 0.0 < rho * np.sqrt(1.0 + t * t) < n / 2:
        raise ValueError(f"A window of radius {rho} sheared by {t} does "
                         f"not fit into an image of size {n}.")
    u, v = coordinates(n)
    x: Final[np.ndarray] = u - t * v
    r: Final[np.ndarray] = np.hypot(x, v)
    window: Final[np.ndarray] = np.where(
        r < rho, np.cos((0.5 * np.pi / rho) * np.minimum(r, rho)) ** 2, 0.0)
    return np.heaviside(x, 0.5) * window


def atom_scale(plan: TransformPlan) -> int:
    """
    Get the scale of the reference atom.

    :param plan: the plan
    :returns: `min(3, j_high)`
    """
    return min(3, plan.params.j_high)


def reference_atom(plan: TransformPlan) -> np.ndarray:
    """
    Get the reference shearlet of scale `min(3, j_high)` and shear 0.

    The atom is the adjoint transform of one unit coefficient at translation
    0 in each of the cones 11 and 12, and is therefore centered at the
    origin.

    :param plan: the plan
    :returns: the image of the atom
    """
    j: Final[int] = atom_scale(plan)
    chosen: Final[set[SubbandIndex]] = {SubbandIndex(CONE_11, j, 0),
                                        SubbandIndex(CONE_12, j, 0)}

    def __unit(index: SubbandIndex, block: np.ndarray) -> np.ndarray:
        result = np.zeros_like(block)
        if index in chosen:
            result[0, 0] = 1.0
        return result

    return adjoint_fdst(plan, ShearletCoefficients.zeros(
        plan.params).map_blocks(__unit))


def _flag(value: str) -> bool:
    """
    Parse a boolean generator argument.

    :param value: the text
    :returns: the value

    >>> _flag("1"), _flag("true"), _flag("0")
    (True, True, False)
    """
    if value.lower() in ("1", "true", "yes"):
        return True
    if value.lower() in ("0", "false", "no"):
        return False
    raise ValueError(f"Invalid flag value '{value}'.")


#: the generators: name -> (permitted arguments, factory)
__GENERATORS: Final[dict[str, tuple[
    dict[str, Callable[[str], object]],
    Callable[..., np.ndarray]]]] = {
    "zero": ({}, lambda n: np.zeros((n, n))),
    "delta": ({}, delta_image),
    "random": ({"seed": int}, lambda n, seed=0: random_image(n, seed)),
    "gaussian": ({"var": float}, gaussian_image),
    "line": ({"t": float, "transpose": _flag}, line_image),
    "edge": ({"t": float, "transpose": _flag}, edge_image),
    "taper": ({"t": float, "radius": float}, tapered_edge_image),
}


def generate_image(spec: str, n: int,
                   plan: TransformPlan | None = None) -> np.ndarray:
    """
    Generate an image from a specification `name[:key=value[,...]]`.

    Available are `zero`, `delta`, `random:seed=S`, `gaussian:var=V`,
    `line:t=T,transpose=B`, `edge:t=T,transpose=B`, `taper:t=T,radius=X`,
    and `atom`, which needs a plan.

    :param spec: the specification
    :param n: the side length
    :param plan: the plan for `atom`
    :returns: the image

    >>> generate_image("line:t=0", 4)[:, 2].tolist()
    [1.0, 1.0, 1.0, 1.0]
    >>> generate_image("spiral", 4)
    Traceback (most recent call last):
    ...
    ValueError: Unknown image generator 'spiral'.
    """
    if not isinstance(spec, str):
        raise type_error(spec, "spec", str)
    match: Final = __GEN_SPEC.fullmatch(spec.strip())
    if match is None:
        raise ValueError(f"Invalid image generator '{spec}'.")
    name: Final[str] = match["name"]
    args: Final[dict[str, str]] = dict(
        a.split("=") for a in match["args"].split(",")) \
        if match["args"] else {}
    if name == "atom":
        if args:
            raise ValueError("Generator 'atom' takes no arguments.")
        if plan is None:
            raise ValueError("Generator 'atom' needs a transform plan.")
        if plan.params.n != n:
            raise ValueError(f"Plan is for {plan.params}, not for N={n}.")
        return reference_atom(plan)
    if name not in __GENERATORS:
        raise ValueError(f"Unknown image generator '{name}'.")
    permitted, factory = __GENERATORS[name]
    unknown: Final[set[str]] = set(args) - set(permitted)
    if unknown:
        raise ValueError(f"Generator '{name}' does not accept "
                         f"{sorted(unknown)}.")
    return factory(n, **{k: permitted[k](v) for k, v in args.items()})


def encode_raw_image(image: np.ndarray) -> bytes:
    """
    Serialize an image in the raw format.

    :param image: the square image
    :returns: the bytes
    """
    check_array(image, "image")
    if (image.ndim != 2) or (image.shape[0] != image.shape[1]):
        raise ValueError(f"Image must be square, but has shape "
                         f"{image.shape}.")
    is_complex: Final[bool] = image.dtype.kind == "c"
    return f"img1 {image.shape[0]} complex{int(is_complex)}\n".encode(
        "ascii") + np.ascontiguousarray(
        image, dtype="<c16" if is_complex else "<f8").tobytes()


def decode_raw_image(data: bytes) -> np.ndarray:
    """
    Parse an image in the raw format.

    :param data: the bytes
    :returns: the image
    :raises FormatError: if the data is malformed
    """
    header, payload = split_header(data, "raw image")
    match: Final = __RAW_HEADER.fullmatch(header)
    if match is None:
        raise FormatError(f"Invalid raw image header '{header}'.")
    n: Final[int] = int(match["n"])
    is_complex: Final[bool] = match["c"] == "1"
    size: Final[int] = n * n * (16 if is_complex else 8)
    if len(payload) != size:
        raise FormatError(f"Raw image of size {n} needs {size} bytes, but "
                          f"has {len(payload)}.")
    return np.frombuffer(payload, dtype="<c16" if is_complex else "<f8") \
        .astype(complex if is_complex else float).reshape(n, n)


def decode_pgm(data: bytes) -> np.ndarray:
    """
    Parse a binary graymap.

    :param data: the bytes
    :returns: the image with values in [0, 1]
    :raises FormatError: if the data is malformed
    """
    tokens: Final[list[bytes]] = []
    pos: int = 0
    while len(tokens) < 4:
        match = __PGM_TOKEN.match(data, pos)
        if match is None:
            raise FormatError("Truncated graymap header.")
        tokens.append(match[1])
        pos = match.end()
    if tokens[0] != b"P5":
        raise FormatError(f"Not a binary graymap: magic {tokens[0]!r}.")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as err:
        raise FormatError(f"Invalid graymap header {tokens}.") from err
    if not (0 < maxval <= 65535) or (width <= 0) or (height <= 0):
        raise FormatError(f"Invalid graymap header {tokens}.")
    if (pos >= len(data)) or not data[pos:pos + 1].isspace():
        raise FormatError("Missing whitespace after graymap header.")
    pos += 1
    dtype: Final[str] = "u1" if maxval < 256 else ">u2"
    size: Final[int] = width * height * np.dtype(dtype).itemsize
    if len(data) - pos < size:
        raise FormatError(f"Graymap needs {size} data bytes, but has "
                          f"{len(data) - pos}.")
    pixels: Final[np.ndarray] = np.frombuffer(
        data, dtype=dtype, count=width * height, offset=pos)
    return pixels.reshape(height, width).astype(float) / maxval


def encode_pgm(image: np.ndarray) -> bytes:
    """
    Serialize an image as 8 bit binary graymap.

    The real part is clipped to [0, 1] and quantized.

    :param image: the image
    :returns: the bytes
    """
    check_array(image, "image")
    if image.ndim != 2:
        raise ValueError(f"Image must be 2D, but has shape {image.shape}.")
    gray: Final[np.ndarray] = np.round(
        np.clip(np.real(image), 0.0, 1.0) * 255.0).astype(np.uint8)
    return f"P5\n{image.shape[1]} {image.shape[0]}\n255\n".encode("ascii") \
        + gray.tobytes()


def __is_pgm(path: str) -> bool:
    """
    Check whether a path names a graymap.

    :param path: the path
    :returns: `True` for the suffix `.pgm`
    """
    return path.lower().endswith(".pgm")


def read_image(path: str) -> np.ndarray:
    """
    Read an image file.

    :param path: the path
    :returns: the image
    """
    src: Final[Path] = Path(path)
    data: Final[bytes] = src.read_bytes()
    image: Final[np.ndarray] = decode_pgm(data) if __is_pgm(src) \
        else decode_raw_image(data)
    logger(f"read image of shape {image.shape} from '{src}'.")
    return image


def write_image(path: str, image: np.ndarray) -> Path:
    """
    Write an image file.

    :param path: the path
    :param image: the image
    :returns: the canonical path
    """
    dest: Final[Path] = Path(path)
    dest.write_bytes_atomic(encode_pgm(image) if __is_pgm(dest)
                            else encode_raw_image(image))
    logger(f"wrote image of shape {image.shape} to '{dest}'.")
    return dest
