from __future__ import annotations

import pytest
from helpers import hexagon6, r3_example

from tightposets.frame import Frame
from tightposets.poset import Poset


@pytest.fixture
def cross4() -> Frame:
    """{e1, e2, -e1, -e2} in R^2."""
    return Frame.exact([[1, 0], [0, 1], [-1, 0], [0, -1]])


@pytest.fixture
def cross4_poset() -> Poset:
    return Poset.from_index_sets(4, [[], [1, 2], [2, 3], [3, 4], [1, 4], [1, 2, 3, 4]])


@pytest.fixture
def r3() -> Frame:
    return r3_example()


@pytest.fixture
def hex6() -> Frame:
    return hexagon6()


@pytest.fixture(scope="session")
def census():
    """Planar census for k = 2..6, computed once per session."""
    from tightposets.enumeration import enumerate_factor_posets_r2

    return {k: enumerate_factor_posets_r2(k) for k in range(2, 7)}


_ACCEPTANCE: list[tuple[int, str, bool, float, float]] = []


@pytest.fixture
def acceptance_record():
    """Collects (criterion, title, passed, seconds, limit) for the summary."""
    return _ACCEPTANCE.append


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, secs, limit in sorted(_ACCEPTANCE):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"criterion {num:2d}: {verdict}  {title}  ({secs:.2f}s, limit {limit:g}s)"
        )
