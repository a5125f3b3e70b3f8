import random
from collections import defaultdict

import pytest

_criteria = defaultdict(list)


@pytest.fixture
def rng():
    return random.Random(20260919)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        if rep.skipped:
            detail = detail or str(rep.longrepr[-1]).removeprefix("Skipped: ")
        _criteria[marker.args[0]].append((rep.outcome, item.name, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        runs = _criteria[number]
        ran = [r for r in runs if r[0] != "skipped"]
        verdict = "PASS" if ran and all(r[0] == "passed" for r in ran) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}")
        for outcome, name, detail in runs:
            terminalreporter.write_line(f"    {outcome:<7} {name}: {detail}")
