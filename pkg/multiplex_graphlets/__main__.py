"""Allow ``python -m multiplex_graphlets``."""

import sys

from multiplex_graphlets.cli import main

sys.exit(main())
