import time
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_RESULTS = {}


class _Checks:
    def __init__(self):
        self.failures = []

    def check(self, condition, message):
        if not condition:
            self.failures.append(message)
        return bool(condition)


@pytest.fixture
def criterion():
    """Record one acceptance criterion: checks, wall time, and a time limit."""

    @contextmanager
    def run(number, title, limit=None):
        checks = _Checks()
        start = time.perf_counter()
        error = None
        try:
            yield checks
        except Exception as exc:  # recorded, then re-raised
            error = exc
            raise
        finally:
            elapsed = time.perf_counter() - start
            notes = list(checks.failures)
            if error is not None:
                notes.append(f"error: {error!r}")
            if limit is not None and elapsed > limit:
                notes.append(f"took {elapsed:.2f} s, limit {limit:g} s")
            _RESULTS[number] = (title, not notes, elapsed, notes)
        assert not checks.failures, "; ".join(checks.failures)
        if limit is not None:
            assert elapsed <= limit, f"took {elapsed:.2f} s, limit {limit:g} s"

    return run


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, elapsed, notes = _RESULTS[number]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.2f} s]"
        terminalreporter.write_line(line)
        for note in notes[:8]:
            terminalreporter.write_line(f"    - {note}")
        if len(notes) > 8:
            terminalreporter.write_line(f"    - ... {len(notes) - 8} more")
