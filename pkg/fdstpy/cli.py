"""
The command line interface.

    fdstpy fdst (--input PATH | --gen SPEC) --output PATH
    fdstpy adjoint --input PATH --output PATH
    fdstpy inverse --input PATH --output PATH
    fdstpy weights
    fdstpy measure ID [ID ...] [--out-dir DIR]
    fdstpy bench [--sizes N ...] [--repeats K]

Exit codes: 0 on success, 1 on any error, 2 if the CG inversion did not
converge or the weight fit failed.
"""
import argparse
import sys
import traceback as tb
from typing import Callable, Final, Sequence

from fdstpy.config import (
    DEFAULT_N,
    DEFAULT_R,
    MEASURE_IDS,
    RunConfig,
    make_config,
)
from fdstpy.grid import GridParams
from fdstpy.images import generate_image, random_image, read_image, \
    write_image
from fdstpy.logger import logger, set_quiet
from fdstpy.measures import (
    MeasureReport,
    RNGSpec,
    complexity_exponent,
    line_decay_table,
    measure_d1,
    measure_d2,
    measure_d3,
    measure_d4,
    measure_d5,
    measure_d6,
    measure_d7,
    measure_d8,
    summary_lines,
    time_transforms,
    write_csv,
)
from fdstpy.shearlets import PROFILES
from fdstpy.storage import read_coefficients, write_coefficients
from fdstpy.transform import (
    CGConfig,
    TransformPlan,
    adjoint_fdst,
    build_plan,
    fdst,
    inverse_fdst,
    obtain_weights,
)
from fdstpy.version import __version__
from fdstpy.weights import CHOICES, WeightFitError, residual_norm

#: the command succeeded
EXIT_OK: Final[int] = 0
#: the command failed
EXIT_ERROR: Final[int] = 1
#: the iteration did not converge or the weights could not be fitted
EXIT_NOT_CONVERGED: Final[int] = 2


class _Parser(argparse.ArgumentParser):
    """An argument parser that exits with code 1 on usage errors."""

    def error(self, message: str):  # type: ignore
        """
        Print the usage and exit with code 1.

        :param message: the error message
        """
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    """
    Create the parser of the flags shared by all commands.

    All defaults are `None`, so unset flags fall back to the configuration
    file and then to the defaults of :class:`RunConfig`.

    :returns: the parent parser
    """
    p: Final[argparse.ArgumentParser] = argparse.ArgumentParser(
        add_help=False)
    p.add_argument("--n", type=int, help=f"image side length "
                   f"(default: from the input, else {DEFAULT_N})")
    p.add_argument("--r", type=int, help=f"radial oversampling "
                   f"(default: from the input, else {DEFAULT_R})")
    p.add_argument("--choice", type=int, choices=CHOICES,
                   help="weight basis choice (default: 1)")
    p.add_argument("--profile", choices=sorted(PROFILES),
                   help="window smoothness profile (default: quadratic)")
    p.add_argument("--tol", type=float, help="CG tolerance (default: 1e-6)")
    p.add_argument("--max-iter", dest="max_iter", type=int,
                   help="CG iteration cap (default: 100)")
    p.add_argument("--relative-tol", dest="relative_tol",
                   action="store_const", const=True,
                   help="make the CG tolerance relative to ||b||")
    p.add_argument("--seed", type=int, help="random seed (default: 0)")
    p.add_argument("--cache-dir", dest="cache_dir",
                   help="weight cache directory (default: $FDSTPY_CACHE_DIR "
                        "or ~/.cache/fdstpy)")
    p.add_argument("--config", help="YAML file with default settings")
    p.add_argument("--quiet", action="store_const", const=True,
                   help="suppress the log on stderr")
    return p


def make_parser() -> argparse.ArgumentParser:
    """
    Create the argument parser.

    :returns: the parser
    """
    common: Final[argparse.ArgumentParser] = _common_flags()
    parser: Final[argparse.ArgumentParser] = _Parser(
        prog="fdstpy", description="The fast digital shearlet transform.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    cmd = sub.add_parser("fdst", parents=[common],
                         help="transform an image to shearlet coefficients")
    src = cmd.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="the image file (.pgm or raw)")
    src.add_argument("--gen", help="an image generator, e.g. gaussian:var=256")
    cmd.add_argument("--output", required=True,
                     help="the coefficient container to write")

    for name, text in (("adjoint", "apply the adjoint transform"),
                       ("inverse", "invert the transform by CG")):
        cmd = sub.add_parser(name, parents=[common], help=text)
        cmd.add_argument("--input", required=True,
                         help="the coefficient container")
        cmd.add_argument("--output", required=True,
                         help="the image file to write (.pgm or raw)")

    sub.add_parser("weights", parents=[common],
                   help="fit or load the weights and print them")

    cmd = sub.add_parser("measure", parents=[common],
                         help="run quality measures")
    cmd.add_argument("measures", nargs="+", metavar="ID",
                     choices=list(MEASURE_IDS) + ["all"],
                     help="the measures, d1 to d8 or all")
    cmd.add_argument("--out-dir", dest="out_dir",
                     help="the directory for the CSV files (default: .)")

    cmd = sub.add_parser("bench", parents=[common],
                         help="time the transform over image sizes")
    cmd.add_argument("--sizes", type=int, nargs="+",
                     help="the image sizes (default: 32 64 128 256 512)")
    cmd.add_argument("--repeats", type=int,
                     help="runs per timing, the median is used (default: 3)")
    return parser


def _grid(cfg: RunConfig, found: GridParams | None = None) -> GridParams:
    """
    Get the grid of a run.

    :param cfg: the configuration
    :param found: the grid of the input file, if any
    :returns: the grid parameters
    :raises ValueError: if the configuration contradicts the input
    """
    if found is None:
        return GridParams(DEFAULT_N if cfg.n is None else cfg.n,
                          DEFAULT_R if cfg.r is None else cfg.r)
    if ((cfg.n is not None) and (cfg.n != found.n)) \
            or ((cfg.r is not None) and (cfg.r != found.r)):
        raise ValueError(f"The input holds {found}, but N={cfg.n}, R={cfg.r} "
                         "was requested.")
    return found


def _plan(cfg: RunConfig, params: GridParams) -> TransformPlan:
    """
    Build the plan of a run.

    :param cfg: the configuration
    :param params: the grid parameters
    :returns: the plan
    """
    return build_plan(params.n, params.r, cfg.choice, cfg.profile,
                      cfg.cache_dir)


def cmd_fdst(cfg: RunConfig) -> int:
    """
    Transform an image file or a generated image.

    :param cfg: the configuration
    :returns: the exit code
    """
    if cfg.input is not None:
        image = read_image(cfg.input)
        params = _grid(cfg, GridParams(image.shape[0], DEFAULT_R if cfg.r
                                       is None else cfg.r))
        if image.shape != params.image_shape:
            raise ValueError(f"Image must be square, but has shape "
                             f"{image.shape}.")
        plan = _plan(cfg, params)
    else:
        if cfg.gen is None:
            raise ValueError("Need an input file or an image generator.")
        params = _grid(cfg)
        plan = _plan(cfg, params)
        image = generate_image(cfg.gen, params.n, plan)
    if cfg.output is None:
        raise ValueError("Need an output file.")
    write_coefficients(cfg.output, fdst(plan, image))
    return EXIT_OK


def cmd_adjoint(cfg: RunConfig) -> int:
    """
    Apply the adjoint transform to a coefficient container.

    :param cfg: the configuration
    :returns: the exit code
    """
    if (cfg.input is None) or (cfg.output is None):
        raise ValueError("Need an input and an output file.")
    c = read_coefficients(cfg.input)
    plan: Final[TransformPlan] = _plan(cfg, _grid(cfg, c.params))
    write_image(cfg.output, adjoint_fdst(plan, c))
    return EXIT_OK


def cmd_inverse(cfg: RunConfig) -> int:
    """
    Invert the transform of a coefficient container.

    The image is written even if the iteration did not converge.

    :param cfg: the configuration
    :returns: the exit code, 2 if the iteration did not converge
    """
    if (cfg.input is None) or (cfg.output is None):
        raise ValueError("Need an input and an output file.")
    c = read_coefficients(cfg.input)
    plan: Final[TransformPlan] = _plan(cfg, _grid(cfg, c.params))
    res = inverse_fdst(plan, c, CGConfig(cfg.tol, cfg.max_iter,
                                         relative=cfg.relative_tol))
    write_image(cfg.output, res.x)
    if not res.converged:
        logger(f"inversion did not converge: residual {res.residual:.3e} "
               f"after {res.iterations} iterations.")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_weights(cfg: RunConfig) -> int:
    """
    Fit or load weights and print their coefficients and residual.

    :param cfg: the configuration
    :returns: the exit code
    """
    params: Final[GridParams] = _grid(cfg)
    weights = obtain_weights(params, cfg.choice, cfg.cache_dir)
    print(f"grid: {params}, choice: {cfg.choice}")  # noqa: T201
    print("coefficients: " + " ".join(  # noqa: T201
        repr(float(x)) for x in weights.coeffs))
    print(f"residual norm: {residual_norm(params, weights)!r}")  # noqa: T201
    return EXIT_OK


def cmd_measure(cfg: RunConfig) -> int:
    """
    Run quality measures and write one CSV per result.

    :param cfg: the configuration
    :returns: the exit code
    """
    if len(cfg.measures) <= 0:
        raise ValueError("No measure selected.")
    params: Final[GridParams] = _grid(cfg)
    rng: Final[RNGSpec] = RNGSpec(cfg.seed)
    cg: Final[CGConfig] = CGConfig(cfg.tol, cfg.max_iter,
                                   relative=cfg.relative_tol)
    plan: Final[TransformPlan] = _plan(cfg, params)

    def __factory(n: int) -> TransformPlan:
        return plan if n == params.n else _plan(cfg, GridParams(n, params.r))

    runners: Final[dict[str, Callable[[], tuple[MeasureReport, ...]]]] = {
        "d1": lambda: measure_d1(plan, rng),
        "d2": lambda: measure_d2(plan, rng, cg),
        "d3": lambda: measure_d3(plan, rng, cg),
        "d4": lambda: measure_d4(plan),
        "d5": lambda: measure_d5(plan),
        "d6": lambda: measure_d6(__factory, rng, cfg.sizes, cfg.repeats),
        "d7": lambda: measure_d7(plan),
        "d8": lambda: measure_d8(plan, cg)}
    reports: Final[list[MeasureReport]] = []
    for mid in cfg.measures:
        for report in runners[mid]():
            write_csv(report, cfg.out_dir)
            reports.append(report)
    print("\n".join(summary_lines(reports)))  # noqa: T201
    return EXIT_OK


def cmd_bench(cfg: RunConfig) -> int:
    """
    Time the transform, its adjoint and the 2D FFT over image sizes.

    :param cfg: the configuration
    :returns: the exit code
    """
    r: Final[int] = DEFAULT_R if cfg.r is None else cfg.r
    fdst_times: Final[list[float]] = []
    print(f"{'N':>6} {'fdst':>12} {'adjoint':>12} {'fft2':>12}")  # noqa
    for n in cfg.sizes:
        plan = _plan(cfg, GridParams(n, r))
        timing = time_transforms(plan, random_image(n, cfg.seed),
                                 cfg.repeats)
        fdst_times.append(timing["fdst"])
        print(f"{n:>6} {timing['fdst']:>12.6f} "  # noqa: T201
              f"{timing['adjoint']:>12.6f} {timing['fft2']:>12.6f}")
    if len(cfg.sizes) > 1:
        print(f"complexity exponent: "  # noqa: T201
              f"{complexity_exponent(cfg.sizes, fdst_times):.4f}")
    return EXIT_OK


#: the command implementations
__COMMANDS: Final[dict[str, Callable[[RunConfig], int]]] = {
    "fdst": cmd_fdst, "adjoint": cmd_adjoint, "inverse": cmd_inverse,
    "weights": cmd_weights, "measure": cmd_measure, "bench": cmd_bench}


def run(cfg: RunConfig) -> int:
    """
    Run a command and map its failures to exit codes.

    :param cfg: the configuration
    :returns: the exit code
    """
    try:
        return __COMMANDS[cfg.command](cfg)
    except WeightFitError as wfe:
        logger(f"the weight fit FAILED: {wfe}")
        return EXIT_NOT_CONVERGED
    except BaseException as be:  # pylint: disable=W0718
        sys.stdout.flush()
        sys.stderr.flush()
        exinfo = "  ".join(tb.format_exception(type(be), value=be,
                                               tb=be.__traceback__))
        logger(f"command '{cfg.command}' FAILED with error '{be}':"
               f"\n  {exinfo}")
        return EXIT_ERROR


def main(argv: Sequence[str] | None = None) -> int:
    """
    Parse the command line and run the command.

    :param argv: the arguments, `None` for `sys.argv[1:]`
    :returns: the exit code
    """
    args: Final[dict] = vars(make_parser().parse_args(argv))
    command: Final[str] = args.pop("command")
    config_file: Final[str | None] = args.pop("config", None)
    set_quiet(bool(args.get("quiet")))
    try:
        cfg: Final[RunConfig] = make_config(command, args, config_file)
    except (ValueError, TypeError) as err:
        logger(f"invalid configuration: {err}")
        return EXIT_ERROR
    set_quiet(cfg.quiet)
    logger(f"fdstpy {__version__}: running '{command}'.")
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

