import sys

import pytest
from hypothesis import settings

from relcomm.corpus import bundled

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def s3():
    return bundled("s3").algebra()


@pytest.fixture(scope="session")
def l5():
    return bundled("l5").algebra()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
