"""Run the command-line front end with ``python -m qkgeo``."""

import sys

from .cli import main


sys.exit(main())
