import re

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def diag(*values):
    return np.diag(np.array(values, dtype=complex))


# one line per acceptance criterion, repeated after the run so the log ends with them
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    return Criterion


class Criterion:
    """Collects the checks of one acceptance criterion and reports a single line."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.failed: list[str] = []
        self.notes: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        if not ok:
            self.failed.append(what)

    def note(self, text: str) -> None:
        self.notes.append(text)

    def finish(self, expect_fail: bool = False) -> None:
        """Print the report line and fail the test if any check failed.

        With ``expect_fail`` the line reads XFAIL/XPASS; the test is then
        marked as a strict expected failure by the caller.
        """
        if expect_fail:
            status = "XFAIL" if self.failed else "XPASS"
        else:
            status = "FAIL" if self.failed else "PASS"
        detail = "; ".join(self.failed[:3] if self.failed else self.notes)
        line = f"[criterion {self.number}] {status} {self.title}" + (f" ({detail})" if detail else "")
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert not self.failed, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(re.search(r"\d+", s).group())):
            terminalreporter.write_line(line)
