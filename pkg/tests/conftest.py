"""Collects one pass/fail line per acceptance criterion and prints them at the end."""

from collections import OrderedDict

import pytest

_RESULTS = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and not rep.failed):
        return
    number, title = marker.args
    entry = _RESULTS.setdefault(number, {"title": title, "failed": [], "ran": 0})
    if rep.when == "call":
        entry["ran"] += 1
    if rep.failed:
        entry["failed"].append(item.callspec.id if hasattr(item, "callspec") else item.name)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        status = "FAIL" if entry["failed"] else "PASS"
        detail = f" (failing: {', '.join(entry['failed'])})" if entry["failed"] else ""
        terminalreporter.write_line(f"criterion {number:2d} {status}  {entry['title']}{detail}")
