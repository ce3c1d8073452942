"""Global knobs.

``CHECKS`` turns on the expensive cross-checks (e.g. every relational
composite is recomputed through the Vietoris multiplication).  Tests switch it
on; the environment variable ``KLEISLAB_CHECKS=1`` does the same for the CLI.
"""

import os

CHECKS = os.environ.get("KLEISLAB_CHECKS", "0") == "1"

# largest carrier accepted by build_poset unless the caller raises it
DEFAULT_SIZE_CAP = 16


def set_checks(flag):
    global CHECKS
    CHECKS = bool(flag)
