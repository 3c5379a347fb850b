from __future__ import annotations

import time

import pytest

CRITERIA: dict[int, str] = {}


class Criterion:
    def __init__(self, number: int, limit: float):
        self.number = number
        self.limit = limit
        self.start = time.perf_counter()

    def done(self, ok: bool, detail: str = "") -> None:
        elapsed = time.perf_counter() - self.start
        passed = ok and elapsed < self.limit
        line = f"criterion {self.number}: {'PASS' if passed else 'FAIL'} ({elapsed:.2f} s, limit {self.limit:g} s)"
        if detail:
            line += f" {detail}"
        CRITERIA[self.number] = line
        print(line)
        assert ok, detail
        assert elapsed < self.limit, f"runtime {elapsed:.2f} s over {self.limit} s"


@pytest.fixture
def criterion():
    made = []

    def start(number: int, limit: float) -> Criterion:
        c = Criterion(number, limit)
        made.append(c)
        return c

    yield start
    for c in made:
        # a crash before done() still leaves a FAIL line
        CRITERIA.setdefault(c.number, f"criterion {c.number}: FAIL (did not complete)")


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
