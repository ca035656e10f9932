"""An internal file with the version of the fdstpy package."""
from typing import Final

__version__: Final[str] = "0.1.0"
