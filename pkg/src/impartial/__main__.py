"""Allow ``python -m impartial`` as an alias for the console script."""

import sys

from impartial.cli import main

sys.exit(main())
