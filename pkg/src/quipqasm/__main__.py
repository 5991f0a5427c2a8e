"""``python3 -m quipqasm`` runs the command-line tools."""

import sys

from .cli import main

sys.exit(main())
