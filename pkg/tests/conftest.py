import re
import time
from contextlib import contextmanager

import pytest

_RESULTS = {}


class Criterion:
    def __init__(self, num, title, limit):
        self.num, self.title, self.limit = num, title, limit
        self.elapsed = None
        self.ok = False

    @contextmanager
    def timed(self):
        t0 = time.perf_counter()
        try:
            yield self
        finally:
            self.elapsed = time.perf_counter() - t0

    def within_limit(self):
        assert self.elapsed is not None and self.elapsed < self.limit, f"took {self.elapsed:.1f} s, limit {self.limit} s"


@pytest.fixture
def criterion(request):
    made = []

    def make(num, title, limit):
        c = Criterion(num, title, limit)
        made.append(c)
        return c

    yield make
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    for c in made:
        c.ok = not failed
        _RESULTS[c.num] = c


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS, key=lambda k: (int(re.match(r"\d+", k).group()), k)):
        c = _RESULTS[num]
        t = "n/a" if c.elapsed is None else f"{c.elapsed:.2f} s"
        terminalreporter.write_line(f"criterion {num:>3}: {'PASS' if c.ok else 'FAIL'}  {c.title}  ({t}, limit {c.limit} s)")
