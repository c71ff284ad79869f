import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_RESULTS: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, text): acceptance criterion covered by the test")
    config.addinivalue_line("markers", "slow: long-running scale test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    cid, text = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        prev = _RESULTS.get(cid)
        # split criteria: any failure fails it; an optional part skipping does not
        rank = {"SKIP": 0, "PASS": 1, "FAIL": 2}
        if prev is None or rank[status] > rank[prev[0]]:
            _RESULTS[cid] = (status, text)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_RESULTS, key=lambda c: int(c.lstrip("C"))):
        status, text = _RESULTS[cid]
        terminalreporter.write_line(f"{cid} {status}: {text}")
