import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from kleislab import config  # noqa: E402


@pytest.fixture(autouse=True)
def _checks_on():
    # every composite is re-derived through the Vietoris multiplication
    old = config.CHECKS
    config.set_checks(True)
    yield
    config.set_checks(old)
