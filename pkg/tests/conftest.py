import os
import tempfile

import pytest

# Keep CLI subspace caches out of the user's home during the test run.
os.environ.setdefault("FLAGLAB_CACHE", tempfile.mkdtemp(prefix="flaglab-test-cache-"))

from flaglab.geometry import get_geometry  # noqa: E402


@pytest.fixture(scope="session")
def g12():
    return get_geometry(1, 2)


@pytest.fixture(scope="session")
def g22():
    return get_geometry(2, 2)


@pytest.fixture(scope="session")
def g23():
    return get_geometry(2, 3)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
