from __future__ import annotations

import pytest

from hiermet.cache import FileCache
from hiermet.cases import CASES, case_context, seed_case


@pytest.fixture(scope="session")
def case_contexts():
    return {name: case_context(name) for name in CASES}


@pytest.fixture
def seeded_cache(tmp_path):
    cache = FileCache(tmp_path / "cache")
    keys = {name: seed_case(cache, name) for name in CASES}
    return cache, keys


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Records one PASS/FAIL line per acceptance criterion, echoed in the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
