import sys

import pytest

from tormap import tilings as tl
from tormap.torusmap import quotient


@pytest.fixture(scope="session")
def square3():
    return quotient("4^4", ((3, 0), (0, 3)))


@pytest.fixture(scope="session")
def tri53():
    return quotient("3^6", ((5, 0), (0, 3)))


ALL_TAGS = [t.value for t in tl.TilingType]
EH_TAGS = [t.value for t in tl.EDGE_HOMOGENEOUS]
SE_TAGS = [t.value for t in tl.SEMI_EQUIVELAR]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
