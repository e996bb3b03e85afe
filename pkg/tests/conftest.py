import json
from pathlib import Path

import pytest

from zetaladder.config import cache_dir
from zetaladder.ladder import Ladder, LadderConfig

DATA = Path(__file__).parent / "data"
# heights up to 1e6 with three reverse levels need a little over 1.09e6
FULL_DOMAIN = 1.1e6
SMALL_DOMAIN = 2.0e4


@pytest.fixture(scope="session")
def goldens():
    return json.loads((DATA / "golden_zeta.json").read_text())


@pytest.fixture(scope="session")
def small_ladder():
    return Ladder.cached(cache_dir(), LadderConfig(domain_hi=SMALL_DOMAIN))


@pytest.fixture(scope="session")
def full_ladder():
    """Ladder over [0, 1.1e6]; the J table is built once (a few minutes) and cached on disk."""
    return Ladder.cached(cache_dir(), LadderConfig(domain_hi=FULL_DOMAIN))


# -- acceptance summary: one PASS/FAIL line per criterion ---------------------------

_CRITERIA = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    n, title = mark.args
    ok = _CRITERIA.get(n, (title, True))[1]
    _CRITERIA[n] = (title, ok and call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
