"""
Quantitative quality measures of the transform.

Every measure returns a tuple of :class:`MeasureReport` records, each a
named curve of (abscissa, ordinate) points. Scalar results are curves with
a single point at abscissa 0. All measures are deterministic functions of
the plan and the :class:`RNGSpec`, except the timings of :func:`measure_d6`.

- d1: algebraic exactness, `||W*W J - J|| / ||J||` on random grid data.
- d2: isometry of the weighting, its condition, and CG invertibility.
- d3: tightness of `S*S` and of the CG inverse.
- d4: decay and smoothness of a reference shearlet in space and frequency.
- d5: shear invariance on a sheared edge.
- d6: speed and empirical complexity.
- d7: decay of aligned and non-aligned coefficients of edges.
- d8: robustness against thresholding and quantization.
"""
import statistics
import time
from dataclasses import dataclass
from math import ceil, log
from typing import Callable, Final, Iterable, Sequence

import numpy as np

from fdstpy.cg import CGResult, conjugate_gradient
from fdstpy.grid import CONE_11, CONE_12, CONE_21, CONE_22, GridParams
from fdstpy.images import edge_image, gaussian_image, line_image, \
    reference_atom, tapered_edge_image
from fdstpy.logger import log_duration, logger
from fdstpy.path import Path
from fdstpy.ppft import PPImage, adjoint_ppft, ppft
from fdstpy.shearlets import ShearletCoefficients, SubbandIndex, analyze, \
    synthesize
from fdstpy.transform import CGConfig, TransformPlan, adjoint_fdst, fdst, \
    inverse_fdst
from fdstpy.types import check_int, type_error
from fdstpy.weights import apply_weight, gram_apply, gram_condition, \
    isometry_defect

#: the number of random images of the Monte Carlo estimates
RANDOM_IMAGES: Final[int] = 5
#: the floor applied before taking logarithms
LOG_FLOOR: Final[float] = 1e-300
#: the supported bit generators
ALGORITHMS: Final[tuple[str, ...]] = ("PCG64", "PCG64DXSM", "Philox",
                                      "SFC64", "MT19937")
#: the edge slopes of the geometric exactness test
EDGE_SLOPES: Final[tuple[float, ...]] = (-1.0, -0.5, 0.0, 0.5, 1.0)
#: the slopes of the transposed edges of the geometric exactness test
TRANSPOSED_SLOPES: Final[tuple[float, ...]] = (-0.5, 0.0, 0.5)
#: the exponents of the coefficient-count thresholding
THRES1_P: Final[tuple[float, ...]] = (2.0, 4.0, 6.0, 8.0, 10.0)
#: the exponents of the magnitude thresholding
THRES2_P: Final[tuple[float, ...]] = (0.001, 0.011, 0.021, 0.031, 0.041)
#: the bit depths of the quantization
QUANT_Q: Final[tuple[float, ...]] = (8.0, 7.5, 7.0, 6.5, 6.0)


@dataclass(frozen=True, init=False)
class RNGSpec:
    """The bit generator and seed behind all random images."""

    #: the name of the numpy bit generator
    algorithm: str
    #: the seed
    seed: int

    def __init__(self, seed: int = 0, algorithm: str = "PCG64"):
        """
        Create the random number specification.

        :param seed: the seed, a nonnegative 64 bit integer
        :param algorithm: the bit generator
        """
        if algorithm not in ALGORITHMS:
            raise ValueError(f"Unknown bit generator '{algorithm}', choose "
                             f"one of {ALGORITHMS}.")
        object.__setattr__(self, "algorithm", algorithm)
        object.__setattr__(self, "seed", check_int(seed, "seed", 0,
                                                   (1 << 64) - 1))

    def generator(self) -> np.random.Generator:
        """
        Create a fresh generator.

        :returns: the generator, in the same state for equal specifications
        """
        return np.random.Generator(
            getattr(np.random, self.algorithm)(self.seed))


def random_images(rng: RNGSpec, n: int,
                  count: int = RANDOM_IMAGES) -> list[np.ndarray]:
    """
    Draw real standard-normal images.

    :param rng: the random number specification
    :param n: the side length
    :param count: the number of images
    :returns: the images
    """
    gen: Final[np.random.Generator] = rng.generator()
    return [gen.standard_normal((n, n)) for _ in range(count)]


@dataclass(frozen=True, init=False)
class MeasureReport:
    """One named result curve of a measure."""

    #: the measure id, `d1` to `d8`
    measure: str
    #: the name of the quantity
    name: str
    #: the (abscissa, ordinate) points
    points: tuple[tuple[float, float], ...]
    #: the image side length
    n: int
    #: the radial oversampling
    r: int
    #: the weight basis choice, or `None`
    choice: int | None
    #: the seed, or `None` if no randomness was involved
    seed: int | None
    #: the runtime of the measure in seconds
    runtime: float
    #: warnings, such as non-converged iterations
    flags: tuple[str, ...]

    def __init__(self, measure: str, name: str,
                 points: Iterable[tuple[float, float]], plan: TransformPlan,
                 seed: int | None, runtime: float,
                 flags: Iterable[str] = ()):
        """
        Create the report.

        :param measure: the measure id
        :param name: the quantity name
        :param points: the points
        :param plan: the plan the measure ran on
        :param seed: the seed
        :param runtime: the runtime
        :param flags: the warnings
        """
        pts: Final[tuple[tuple[float, float], ...]] = tuple(
            (float(a), float(b)) for a, b in points)
        if len(pts) <= 0:
            raise ValueError(f"Report {measure}/{name} has no points.")
        object.__setattr__(self, "measure", measure)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "n", plan.params.n)
        object.__setattr__(self, "r", plan.params.r)
        object.__setattr__(self, "choice", plan.weights.choice)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "runtime", float(runtime))
        object.__setattr__(self, "flags", tuple(flags))

    @property
    def value(self) -> float:
        """The ordinate of a scalar report."""
        if len(self.points) != 1:
            raise ValueError(f"{self.name} is a curve, not a scalar.")
        return self.points[0][1]

    @property
    def ordinates(self) -> tuple[float, ...]:
        """The ordinates of all points."""
        return tuple(p[1] for p in self.points)

    def to_csv(self) -> str:
        """
        Render the report as CSV text.

        :returns: the text
        """
        def __s(x: int | None) -> str:
            return "-" if x is None else str(x)

        lines: Final[list[str]] = [
            "# measure,id,N,R,choice,seed",
            f"# {self.measure},{self.name},{self.n},{self.r},"
            f"{__s(self.choice)},{__s(self.seed)}",
            "abscissa,ordinate"]
        lines.extend(f"{a!r},{b!r}" for a, b in self.points)
        return "\n".join(lines) + "\n"


def write_csv(report: MeasureReport, out_dir: str) -> Path:
    """
    Write a report into a directory as `<measure>_<name>.csv`.

    :param report: the report
    :param out_dir: the directory
    :returns: the path of the file
    """
    if not isinstance(report, MeasureReport):
        raise type_error(report, "report", MeasureReport)
    directory: Final[Path] = Path(out_dir)
    directory.ensure_dir_exists()
    dest: Final[Path] = directory.resolve_inside(
        csv_name(report))
    dest.write_text_atomic(report.to_csv())
    return dest


def summary_lines(reports: Iterable[MeasureReport]) -> list[str]:
    """
    Format reports as a table with one row per report.

    :param reports: the reports
    :returns: the lines of the table
    """
    result: Final[list[str]] = [f"{'measure':<8}{'id':<12}values"]
    for rep in reports:
        values = " ".join(f"{v:.4g}" for v in rep.ordinates)
        flags = f"  [{', '.join(rep.flags)}]" if rep.flags else ""
        result.append(f"{rep.measure:<8}{rep.name:<12}{values}{flags}")
    return result


def _relative_error(x: np.ndarray, reference: np.ndarray) -> float:
    """
    Get `||x - reference|| / ||reference||`.

    :param x: the approximation
    :param reference: the reference
    :returns: the relative error
    """
    return float(np.linalg.norm(x - reference) / np.linalg.norm(reference))


def monotone_majorant(profile: np.ndarray, axis: int = 0) -> np.ndarray:
    """
    Get the smallest majorant that does not increase along an axis.

    :param profile: the nonnegative values
    :param axis: the axis along which the majorant decreases
    :returns: the running maximum taken from the far end

    >>> monotone_majorant(np.array([1.0, 3.0, 2.0, 0.0, 1.0])).tolist()
    [3.0, 3.0, 2.0, 1.0, 1.0]
    """
    flipped: Final[np.ndarray] = np.flip(np.abs(profile), axis=axis)
    return np.flip(np.maximum.accumulate(flipped, axis=axis), axis=axis)


def decay_rates(profiles: np.ndarray) -> np.ndarray:
    """
    Get the decay rates of profiles along axis 0.

    The rate is the least-squares slope of `log(majorant)` against
    `log(distance)`, where sample `i` lies at distance `i + 1`.

    :param profiles: the profiles as columns
    :returns: one rate per column
    """
    values: Final[np.ndarray] = np.asarray(profiles, dtype=float)
    if values.ndim == 1:
        return decay_rates(values[:, np.newaxis])
    x: Final[np.ndarray] = np.log(np.arange(1, values.shape[0] + 1))
    y: Final[np.ndarray] = np.log(np.maximum(
        monotone_majorant(values, axis=0), LOG_FLOOR))
    return np.polyfit(x, y, 1)[0]


def decay_rate(profile: np.ndarray) -> float:
    """
    Get the decay rate of a single profile.

    :param profile: the values by increasing distance
    :returns: the rate

    >>> round(decay_rate(np.arange(1, 65, dtype=float) ** -2.0), 6)
    -2.0
    """
    return float(decay_rates(np.asarray(profile, dtype=float))[0])


def half_line_profiles(values: np.ndarray) -> np.ndarray:
    """
    Collect the 2N half-lines starting at the center row and column.

    The first N profiles are the columns `[N/2:, c]`, the next N the rows
    `[c, N/2:]`.

    :param values: the N x N magnitudes
    :returns: the profiles as columns of an (N/2) x 2N array
    """
    half: Final[int] = values.shape[0] // 2
    return np.concatenate((values[half:, :], values[:, half:].T), axis=1)


def holder_exponents(image: np.ndarray, radius: int = 4) -> np.ndarray:
    """
    Estimate the local Hölder exponent at every pixel.

    At each pixel `p0`, the exponent is the least-squares slope of
    `log|I(p) - I(p0)|` against `log ||p - p0||_max` over all pixels p with
    `0 < ||p - p0||_max <= radius` inside the image.

    :param image: the image
    :param radius: the neighborhood radius
    :returns: the exponents, same shape as the image
    """
    radius = check_int(radius, "radius", 1)
    rows, cols = image.shape
    padded: Final[np.ndarray] = np.pad(
        image.astype(complex), radius, constant_values=np.nan)
    sw = np.zeros(image.shape)
    sx = np.zeros(image.shape)
    sy = np.zeros(image.shape)
    sxx = np.zeros(image.shape)
    sxy = np.zeros(image.shape)
    for du in range(-radius, radius + 1):
        for dv in range(-radius, radius + 1):
            dist = max(abs(du), abs(dv))
            if dist == 0:
                continue
            shifted = padded[radius + du:radius + du + rows,
                             radius + dv:radius + dv + cols]
            valid = ~np.isnan(shifted)
            x = log(dist)
            y = np.log(np.maximum(np.abs(
                np.where(valid, shifted, image) - image), LOG_FLOOR))
            w = valid.astype(float)
            sw += w
            sx += w * x
            sy += w * y
            sxx += w * (x * x)
            sxy += w * x * y
    return (sxy - sx * sy / sw) / (sxx - sx * sx / sw)


def _fit_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Get the least-squares slope of `y` against `x`.

    :param x: the abscissae
    :param y: the ordinates
    :returns: the slope
    """
    return float(np.polyfit(np.asarray(x, float), np.asarray(y, float), 1)[0])


def measure_d1(plan: TransformPlan, rng: RNGSpec) -> tuple[MeasureReport]:
    """
    Measure how exactly the windowing is a tight frame.

    :param plan: the plan
    :param rng: the random number specification
    :returns: the report `M_alg`
    """
    start: Final[float] = time.perf_counter()
    gen: Final[np.random.Generator] = rng.generator()
    errors: Final[list[float]] = []
    with log_duration(f"measure d1 for {plan.params}"):
        for _ in range(RANDOM_IMAGES):
            j = PPImage(plan.params, gen.standard_normal(plan.params.shape))
            back = synthesize(analyze(j, plan.table), plan.table)
            errors.append(_relative_error(back.data, j.data))
    return (MeasureReport("d1", "M_alg", [(0, max(errors))], plan,
                          rng.seed, time.perf_counter() - start), )


def measure_d2(plan: TransformPlan, rng: RNGSpec,
               cfg: CGConfig | None = None) -> tuple[MeasureReport, ...]:
    """
    Measure the isometry of the weighting, its condition and invertibility.

    :param plan: the plan
    :param rng: the random number specification
    :param cfg: the CG settings
    :returns: the reports `M_isom1`, `M_isom2` and `M_isom3`
    """
    settings: Final[CGConfig] = CGConfig() if cfg is None else cfg
    params: Final[GridParams] = plan.params
    images: Final[list[np.ndarray]] = random_images(rng, params.n)
    reports: Final[list[MeasureReport]] = []
    with log_duration(f"measure d2 for {params}"):
        start = time.perf_counter()
        reports.append(MeasureReport(
            "d2", "M_isom1", [(0, isometry_defect(
                params, plan.weights, images, "max"))],
            plan, rng.seed, time.perf_counter() - start))

        start = time.perf_counter()
        spectrum = gram_condition(params, plan.weights)
        reports.append(MeasureReport(
            "d2", "M_isom2", [(0, spectrum.condition)], plan, None,
            time.perf_counter() - start,
            () if spectrum.converged else ("eigsh-not-converged", )))

        start = time.perf_counter()
        gram = gram_apply(plan.weights)
        errors: list[float] = []
        flags: list[str] = []
        for image in images:
            b = adjoint_ppft(apply_weight(ppft(params, image),
                                          plan.weights, 1))
            res: CGResult = conjugate_gradient(
                gram, b, None, settings.tol, settings.max_iter,
                settings.relative)
            if not res.converged:
                flags.append("cg-not-converged")
            errors.append(_relative_error(res.x, image))
        reports.append(MeasureReport(
            "d2", "M_isom3", [(0, max(errors))], plan, rng.seed,
            time.perf_counter() - start, sorted(set(flags))))
    return tuple(reports)


def measure_d3(plan: TransformPlan, rng: RNGSpec,
               cfg: CGConfig | None = None) -> tuple[MeasureReport, ...]:
    """
    Measure the tightness of the adjoint and of the CG inverse.

    :param plan: the plan
    :param rng: the random number specification
    :param cfg: the CG settings
    :returns: the reports `M_tight1` and `M_tight2`
    """
    images: Final[list[np.ndarray]] = random_images(rng, plan.params.n)
    start: Final[float] = time.perf_counter()
    adjoint_errors: Final[list[float]] = []
    inverse_errors: Final[list[float]] = []
    flags: Final[set[str]] = set()
    with log_duration(f"measure d3 for {plan.params}"):
        for image in images:
            c = fdst(plan, image)
            adjoint_errors.append(_relative_error(adjoint_fdst(plan, c),
                                                  image))
            res = inverse_fdst(plan, c, cfg)
            if not res.converged:
                flags.add("cg-not-converged")
            inverse_errors.append(_relative_error(res.x, image))
    runtime: Final[float] = time.perf_counter() - start
    return (MeasureReport("d3", "M_tight1", [(0, max(adjoint_errors))],
                          plan, rng.seed, runtime),
            MeasureReport("d3", "M_tight2", [(0, max(inverse_errors))],
                          plan, rng.seed, runtime, sorted(flags)))


def measure_d4(plan: TransformPlan) -> tuple[MeasureReport, ...]:
    """
    Measure the space-frequency localization of the reference shearlet.

    :param plan: the plan
    :returns: the reports `M_decay1`, `M_supp`, `M_decay2`, `M_smooth1` and
        `M_smooth2`
    """
    start: Final[float] = time.perf_counter()
    n: Final[int] = plan.params.n
    with log_duration(f"measure d4 for {plan.params}"):
        atom: Final[np.ndarray] = reference_atom(plan)
        spectrum: Final[np.ndarray] = np.fft.fftshift(np.fft.fft2(
            np.fft.ifftshift(atom)))
        space_rates: Final[np.ndarray] = decay_rates(
            half_line_profiles(np.abs(atom)))
        freq_rates: Final[np.ndarray] = decay_rates(
            half_line_profiles(np.abs(spectrum)))
        mag: Final[np.ndarray] = np.abs(spectrum)
        c: Final[int] = n // 2
        supp: Final[float] = float(mag[c - 3:c + 4, c - 3:c + 4].max()
                                   / mag.max())
        smooth1: Final[float] = float(np.mean(holder_exponents(atom)))
        smooth2: Final[float] = float(np.mean(holder_exponents(spectrum)))
    flags: Final[tuple[str, ...]] = ("degenerate-profile", ) \
        if np.any(space_rates == 0) or np.any(freq_rates == 0) else ()
    runtime: Final[float] = time.perf_counter() - start
    return tuple(MeasureReport("d4", name, [(0, value)], plan, None, runtime,
                               flags) for name, value in (
        ("M_decay1", float(np.mean(space_rates))),
        ("M_supp", supp),
        ("M_decay2", float(np.sum(freq_rates[:n]) / (2 * n))),
        ("M_smooth1", smooth1),
        ("M_smooth2", smooth2)))


def _shear_set(c: ShearletCoefficients, j: int, k: int) -> np.ndarray:
    """
    Collect the coefficients of the cones 21 and 22 at one scale and shear.

    :param c: the coefficients
    :param j: the scale
    :param k: the shear
    :returns: the concatenated coefficients
    """
    return np.concatenate((c[SubbandIndex(CONE_21, j, k)].reshape(-1),
                           c[SubbandIndex(CONE_22, j, k)].reshape(-1)))


def measure_d5(plan: TransformPlan, s: float = 0.5,
               taper: bool = True) -> tuple[MeasureReport]:
    """
    Measure the shear invariance on an edge image.

    The reference edge is `H(u)`, and the sheared image is
    `I_s(u, v) = H(u + s v)`. By default both are faded out by the window of
    :func:`~fdstpy.images.tapered_edge_image`, so that `I_s` is an exact
    shear of `I`. The bare edges differ by more than a shear near the image
    border, and that difference dominates the curve.

    :param plan: the plan
    :param s: the shear, with `2^j s` integral for the scales 1 to 4
    :param taper: fade the edges out before the border?
    :returns: the report `M_shear`, a curve over the scales
    """
    start: Final[float] = time.perf_counter()
    n: Final[int] = plan.params.n
    make: Final[Callable[[float], np.ndarray]] = \
        (lambda t: tapered_edge_image(n, t)) if taper else \
        (lambda t: edge_image(n, t, transpose=True))
    image: Final[np.ndarray] = make(0.0)
    points: Final[list[tuple[float, float]]] = []
    with log_duration(f"measure d5 for {plan.params}"):
        c = fdst(plan, image)
        cs = fdst(plan, make(-s))
        norm = float(np.linalg.norm(image))
        for j in range(1, min(4, plan.params.j_high) + 1):
            shift = (1 << j) * s
            if shift != int(shift):
                raise ValueError(f"2^j s must be an integer, but is {shift} "
                                 f"for j={j}.")
            bound = 1 << j
            worst = 0.0
            for k in range(-bound + 1, bound):
                if not -bound < k + int(shift) < bound:
                    continue
                worst = max(worst, float(np.linalg.norm(
                    _shear_set(cs, j, k) - _shear_set(c, j, k + int(shift))))
                    / norm)
            points.append((j, worst))
    return (MeasureReport("d5", "M_shear", points, plan, None,
                          time.perf_counter() - start), )


def _median_time(fn: Callable[[], object], repeats: int) -> float:
    """
    Get the median runtime of a function.

    :param fn: the function
    :param repeats: the number of runs
    :returns: the median in seconds
    """
    times: Final[list[float]] = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def time_transforms(plan: TransformPlan, image: np.ndarray,
                    repeats: int = 3) -> dict[str, float]:
    """
    Time the transform, its adjoint and the plain 2D FFT.

    :param plan: the plan
    :param image: the image
    :param repeats: the number of runs per timing
    :returns: the median seconds of `fdst`, `adjoint` and `fft2`
    """
    repeats = check_int(repeats, "repeats", 1)
    c: Final[ShearletCoefficients] = fdst(plan, image)
    return {"fdst": _median_time(lambda: fdst(plan, image), repeats),
            "adjoint": _median_time(lambda: adjoint_fdst(plan, c), repeats),
            "fft2": _median_time(lambda: np.fft.fft2(image), repeats)}


def complexity_exponent(sizes: Sequence[int],
                        seconds: Sequence[float]) -> float:
    """
    Fit `seconds = c (n^2)^d` and get d.

    :param sizes: the image side lengths
    :param seconds: the runtimes
    :returns: the exponent d
    """
    return _fit_slope([2 * log(n) for n in sizes], [log(t) for t in seconds])


def measure_d6(plan_factory: Callable[[int], TransformPlan], rng: RNGSpec,
               sizes: Sequence[int] = (32, 64, 128, 256, 512),
               repeats: int = 3) -> tuple[MeasureReport, ...]:
    """
    Measure the speed of the transform over image sizes.

    Plan construction is not timed.

    :param plan_factory: creates the plan for a side length
    :param rng: the random number specification
    :param sizes: the side lengths
    :param repeats: the runs per timing, the median is used
    :returns: the reports `M_speed1`, `M_speed2`, `M_speed3` and the curve
        `timings`
    """
    if len(sizes) < 2:
        raise ValueError("Need at least two sizes to fit the complexity.")
    start: Final[float] = time.perf_counter()
    transform_times: Final[list[float]] = []
    fft_times: Final[list[float]] = []
    plan: TransformPlan | None = None
    with log_duration("measure d6"):
        for n in sizes:
            plan = plan_factory(n)
            image = random_images(rng, n, 1)[0]
            timing = time_transforms(plan, image, repeats)
            logger(f"fdst for N={n} takes {timing['fdst']:.4f}s.")
            transform_times.append(timing["fdst"])
            fft_times.append(timing["fft2"])
    speed1: Final[float] = complexity_exponent(sizes, transform_times)
    speed2: Final[float] = float(np.mean([
        t / (n * n) ** speed1 for n, t in zip(sizes, transform_times)]))
    speed3: Final[float] = float(np.mean([
        t / f for t, f in zip(transform_times, fft_times)]))
    runtime: Final[float] = time.perf_counter() - start
    return (MeasureReport("d6", "M_speed1", [(0, speed1)], plan, rng.seed,
                          runtime),
            MeasureReport("d6", "M_speed2", [(0, speed2)], plan, rng.seed,
                          runtime),
            MeasureReport("d6", "M_speed3", [(0, speed3)], plan, rng.seed,
                          runtime),
            MeasureReport("d6", "timings", zip(sizes, transform_times),
                          plan, rng.seed, runtime))


def is_aligned(index: SubbandIndex, t: float, transposed: bool) -> bool:
    """
    Check whether a subband is aligned with an edge through the origin.

    The edge `H(v - t u)` has its spectrum on the cones 11 and 12, the
    transposed edge `H(u - t v)` on the cones 21 and 22, and edges with
    `|t| = 1` on the seam between them. Within the cones, the shear s is
    aligned if `|s - 2^j t| < 1`. Coarse scales j < 0 have only one shear.

    :param index: the subband
    :param t: the slope of the edge
    :param transposed: is the edge transposed?
    :returns: `True` if aligned

    >>> is_aligned(SubbandIndex(11, 2, 0), 0.0, False)
    True
    >>> is_aligned(SubbandIndex(21, 2, 0), 0.0, False)
    False
    >>> is_aligned(SubbandIndex(12, 1, 1), 0.5, False)
    True
    """
    if index.is_low:
        return False
    cones: Final[tuple[int, ...]] = (CONE_21, CONE_22) if transposed \
        else (CONE_11, CONE_12)
    if (index.iota not in cones) and (abs(t) != 1.0):
        return False
    return (index.j < 0) or (abs(index.s - (2 ** index.j) * t) < 1.0)


def _scale_maxima(c: ShearletCoefficients, t: float,
                  transposed: bool) -> tuple[list[float], list[float]]:
    """
    Get the per-scale maxima of aligned and other coefficients.

    :param c: the coefficients
    :param t: the edge slope
    :param transposed: is the edge transposed?
    :returns: the maxima of aligned and of other subbands, by scale
    """
    p: Final[GridParams] = c.params
    aligned: Final[list[float]] = [0.0] * (p.j_high - p.j_low + 1)
    other: Final[list[float]] = [0.0] * (p.j_high - p.j_low + 1)
    for index, block in c.blocks.items():
        if index.is_low:
            continue
        dest = aligned if is_aligned(index, t, transposed) else other
        pos = index.j - p.j_low
        dest[pos] = max(dest[pos], float(np.max(np.abs(block))))
    return aligned, other


def measure_d7(plan: TransformPlan) -> tuple[MeasureReport, ...]:
    """
    Measure the decay of aligned and non-aligned coefficients of edges.

    :param plan: the plan
    :returns: the curves `c_aligned` and `c_other` over the scales and
        their log2-slopes `M_geo1` and `M_geo2`
    """
    start: Final[float] = time.perf_counter()
    n: Final[int] = plan.params.n
    edges: Final[list[tuple[float, bool]]] = \
        [(t, False) for t in EDGE_SLOPES] \
        + [(t, True) for t in TRANSPOSED_SLOPES]
    scales: Final[list[int]] = list(range(plan.params.j_low,
                                          plan.params.j_high + 1))
    aligned_sum: Final[np.ndarray] = np.zeros(len(scales))
    other_sum: Final[np.ndarray] = np.zeros(len(scales))
    with log_duration(f"measure d7 for {plan.params}"):
        for t, transposed in edges:
            a, o = _scale_maxima(fdst(plan, edge_image(n, t, transposed)),
                                 t, transposed)
            aligned_sum += a
            other_sum += o
    aligned_curve: Final[np.ndarray] = aligned_sum / len(edges)
    other_curve: Final[np.ndarray] = other_sum / len(edges)
    runtime: Final[float] = time.perf_counter() - start
    return (MeasureReport("d7", "c_aligned", zip(scales, aligned_curve),
                          plan, None, runtime),
            MeasureReport("d7", "c_other", zip(scales, other_curve),
                          plan, None, runtime),
            MeasureReport("d7", "M_geo1", [(0, _fit_slope(
                scales, np.log2(np.maximum(aligned_curve, LOG_FLOOR))))],
                plan, None, runtime),
            MeasureReport("d7", "M_geo2", [(0, _fit_slope(
                scales, np.log2(np.maximum(other_curve, LOG_FLOOR))))],
                plan, None, runtime))


def line_decay_table(plan: TransformPlan) -> tuple[MeasureReport, ...]:
    """
    Get the per-scale maximal coefficients of the horizontal line `v = 0`.

    :param plan: the plan
    :returns: the curves `c_max0` of the aligned and `c_max1` of the other
        subbands over the scales
    """
    start: Final[float] = time.perf_counter()
    with log_duration(f"line decay table for {plan.params}"):
        aligned, other = _scale_maxima(
            fdst(plan, line_image(plan.params.n, 0.0)), 0.0, False)
    scales: Final[range] = range(plan.params.j_low, plan.params.j_high + 1)
    runtime: Final[float] = time.perf_counter() - start
    return (MeasureReport("d7", "c_max0", zip(scales, aligned), plan, None,
                          runtime),
            MeasureReport("d7", "c_max1", zip(scales, other), plan, None,
                          runtime))


def threshold_count(c: ShearletCoefficients, p: float) -> \
        ShearletCoefficients:
    """
    Keep only the `ceil(2^-p * count)` largest coefficients.

    :param c: the coefficients
    :param p: the exponent
    :returns: the thresholded coefficients
    """
    flat: Final[np.ndarray] = c.flatten()
    keep: Final[int] = min(flat.size, int(ceil(flat.size * 2.0 ** -p)))
    order: Final[np.ndarray] = np.argsort(np.abs(flat), kind="stable")
    result: Final[np.ndarray] = flat.copy()
    result[order[:flat.size - keep]] = 0.0
    return c.with_flat(result)


def threshold_magnitude(c: ShearletCoefficients, p: float,
                        rule: str = "adjusted") -> ShearletCoefficients:
    """
    Zero all coefficients below a fraction of the largest magnitude.

    The `adjusted` rule uses the threshold `m (1 - 2^-p)`, the `printed`
    rule `m / 2^p`, with m the largest magnitude.

    :param c: the coefficients
    :param p: the exponent
    :param rule: the threshold rule
    :returns: the thresholded coefficients
    """
    flat: Final[np.ndarray] = c.flatten()
    m: Final[float] = float(np.max(np.abs(flat)))
    if rule == "adjusted":
        threshold = m * (1.0 - 2.0 ** -p)
    elif rule == "printed":
        threshold = m / (2.0 ** p)
    else:
        raise ValueError(f"Unknown threshold rule '{rule}'.")
    return c.with_flat(np.where(np.abs(flat) < threshold, 0.0, flat))


def quantize(c: ShearletCoefficients, q: float) -> ShearletCoefficients:
    """
    Round coefficients to multiples of `m / 2^q`.

    m is the largest magnitude over all blocks. Real and imaginary parts
    are rounded separately. The blocks carry unitary inverse FFTs, so the
    step is measured against an isometric coefficient scale.

    :param c: the coefficients
    :param q: the bit depth
    :returns: the quantized coefficients
    """
    flat: Final[np.ndarray] = c.flatten()
    step: Final[float] = float(np.max(np.abs(flat))) / (2.0 ** q)
    if step <= 0.0:
        return c.with_flat(flat.copy())
    return c.with_flat((np.round(flat.real / step)
                        + 1j * np.round(flat.imag / step)) * step)


def measure_d8(plan: TransformPlan, cfg: CGConfig | None = None,
               thres2_rule: str = "adjusted") -> tuple[MeasureReport, ...]:
    """
    Measure the reconstruction error after coefficient manipulations.

    :param plan: the plan
    :param cfg: the CG settings
    :param thres2_rule: the rule of the magnitude threshold
    :returns: the curves `M_thres1`, `M_thres2` and `M_quant`
    """
    start: Final[float] = time.perf_counter()
    image: Final[np.ndarray] = gaussian_image(plan.params.n, 256.0)
    flags: Final[set[str]] = set()
    with log_duration(f"measure d8 for {plan.params}"):
        c: Final[ShearletCoefficients] = fdst(plan, image)

        def __error(d: ShearletCoefficients) -> float:
            res = inverse_fdst(plan, d, cfg)
            if not res.converged:
                flags.add("cg-not-converged")
            return _relative_error(res.x, image)

        thres1 = [(p, __error(threshold_count(c, p))) for p in THRES1_P]
        thres2 = [(p, __error(threshold_magnitude(c, p, thres2_rule)))
                  for p in THRES2_P]
        quant = [(q, __error(quantize(c, q))) for q in QUANT_Q]
    runtime: Final[float] = time.perf_counter() - start
    return (MeasureReport("d8", "M_thres1", thres1, plan, None, runtime,
                          sorted(flags)),
            MeasureReport("d8", "M_thres2", thres2, plan, None, runtime,
                          sorted(flags)),
            MeasureReport("d8", "M_quant", quant, plan, None, runtime,
                          sorted(flags)))


def csv_name(report: MeasureReport) -> str:
    """
    Get the file name of a report.

    :param report: the report
    :returns: the file name
    """
    return f"{report.measure}_{report.name}.csv"
