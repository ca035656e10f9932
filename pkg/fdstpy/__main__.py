"""Run the command line interface via `python3 -m fdstpy`."""
import sys

from fdstpy.cli import main

sys.exit(main())
