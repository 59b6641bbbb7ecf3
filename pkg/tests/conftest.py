import random

import pytest


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, text, ok, detail)``.

    ``number`` is an int or a tag such as ``"8-slow"``.
    """
    lines = request.config.stash.setdefault(_KEY, {})

    def record(number, text, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {number!s:>2}: {text}" + (f" ({detail})" if detail else "")
        lines[number] = line
        print(line)
        assert ok, line

    return record


_KEY = pytest.StashKey[dict]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines, key=lambda k: (int(str(k).split("-")[0]), str(k))):
            terminalreporter.write_line(lines[n])
