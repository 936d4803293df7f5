"""Shared fixtures and the acceptance-criteria report.

Tests in ``test_acceptance.py`` record one line per criterion through the
``acceptance`` fixture.  The lines are printed, in criterion order, in the
terminal summary.
"""
import os

import numpy as np
import pytest

_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    def record(number: int, passed: bool, detail: str) -> None:
        _RESULTS[number] = (bool(passed), detail)
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session", autouse=True)
def _coset_cache(tmp_path_factory):
    """Keep coset-table caches of the test run out of the user's cache directory."""
    old = os.environ.get("HYPERMONOGENIC_CACHE_DIR")
    os.environ["HYPERMONOGENIC_CACHE_DIR"] = str(tmp_path_factory.mktemp("coset-cache"))
    yield
    if old is None:
        os.environ.pop("HYPERMONOGENIC_CACHE_DIR", None)
    else:
        os.environ["HYPERMONOGENIC_CACHE_DIR"] = old


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        passed, detail = _RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {detail}")
