import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SLOW = os.environ.get("FRACPLANE_SLOW") == "1"


def pytest_collection_modifyitems(config, items):
    if SLOW:
        return
    skip = pytest.mark.skip(reason="slow; set FRACPLANE_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
