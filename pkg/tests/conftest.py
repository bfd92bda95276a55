import os
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

_ACCEPTANCE: dict[int, dict] = defaultdict(lambda: {"title": "", "outcomes": []})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = mark.args
        _ACCEPTANCE[number]["title"] = title
        _ACCEPTANCE[number]["outcomes"].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        entry = _ACCEPTANCE[number]
        ok = entry["outcomes"] and all(o == "passed" for o in entry["outcomes"])
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if ok else 'FAIL'}  {entry['title']} ({len(entry['outcomes'])} cases)"
        )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
