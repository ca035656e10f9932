"""fdstpy is a package for the fast digital shearlet transform."""
from typing import Final

import fdstpy.version
from fdstpy.grid import GridParams
from fdstpy.shearlets import ShearletCoefficients, SubbandIndex
from fdstpy.transform import (
    CGConfig,
    TransformPlan,
    adjoint_fdst,
    build_plan,
    fdst,
    inverse_fdst,
)

__version__: Final[str] = fdstpy.version.__version__

__all__ = (
    "CGConfig",
    "GridParams",
    "ShearletCoefficients",
    "SubbandIndex",
    "TransformPlan",
    "adjoint_fdst",
    "build_plan",
    "fdst",
    "inverse_fdst")
